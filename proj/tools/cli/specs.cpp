#include <cctype>
#include <map>
#include <sstream>

#include "cli.hpp"

namespace mlv::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

long parse_long(const std::string& spec, const std::string& text) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(text, &pos);
    if (pos == text.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorCode::MalformedInput, "bad number '" + text + "' in generator spec '" + spec + "'");
}

std::size_t parse_size(const std::string& spec, const std::string& text) {
  const long v = parse_long(spec, text);
  MLV_REQUIRE(v >= 0, ErrorCode::MalformedInput, "negative size in generator spec '" + spec + "'");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> args_of(const std::string& spec, const std::string& body, std::size_t count) {
  auto a = split(body, ',');
  MLV_REQUIRE(a.size() == count, ErrorCode::MalformedInput,
              "generator spec '" + spec + "' expects " + std::to_string(count) + " argument(s)");
  return a;
}

}  // namespace

Tensor parse_gen_spec(const std::string& spec, FieldId field, std::uint64_t seed) {
  const auto colon = spec.find(':');
  MLV_REQUIRE(colon != std::string::npos, ErrorCode::MalformedInput, "generator spec needs NAME:ARGS, got '" + spec + "'");
  const std::string name = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);

  if (name == "matmul") return gen_matmul_form(field, parse_size(spec, args_of(spec, body, 1)[0]));
  if (name == "matmul-map") return gen_matmul_map(field, parse_size(spec, args_of(spec, body, 1)[0]));
  if (name == "quaternion") {
    const auto a = args_of(spec, body, 2);
    return gen_quaternion(field, Scalar::parse(field, a[0]), Scalar::parse(field, a[1]));
  }
  if (name == "diag") {
    const auto a = args_of(spec, body, 3);
    return gen_diag(field, parse_size(spec, a[0]), parse_size(spec, a[1]), parse_size(spec, a[2]));
  }
  if (name == "random") {
    const auto parts = split(body, ':');
    MLV_REQUIRE(!parts.empty() && parts.size() <= 3, ErrorCode::MalformedInput, "random spec is random:SHAPE[:M[:DENSITY]]");
    std::vector<std::size_t> shape;
    for (const auto& n : split(parts[0], ',')) shape.push_back(parse_size(spec, n));
    const std::size_t m = parts.size() > 1 ? parse_size(spec, parts[1]) : 1;
    double density = 1.0;
    if (parts.size() > 2) {
      try {
        density = std::stod(parts[2]);
      } catch (const std::exception&) {
        fail(ErrorCode::MalformedInput, "bad density in '" + spec + "'");
      }
    }
    return gen_random(field, VarBlocks(shape), m, seed, density);
  }
  fail(ErrorCode::MalformedInput, "unknown generator '" + name + "'");
}

namespace {

struct PolyParser {
  const std::string& s;
  FieldId field;
  std::size_t pos = 0;
  std::vector<std::pair<std::map<std::size_t, unsigned>, Scalar>> terms;
  std::size_t max_var = 0;

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::MalformedInput, what + " at offset " + std::to_string(pos) + " in '" + s + "'");
  }
  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string digits() {
    skip();
    const std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (start == pos) error("expected digits");
    return s.substr(start, pos - start);
  }

  void factor(std::map<std::size_t, unsigned>& mono, Scalar& coef) {
    skip();
    if (pos < s.size() && s[pos] == 'x') {
      ++pos;
      const std::size_t v = std::stoul(digits());
      if (v == 0) error("variables are numbered from x1");
      unsigned e = 1;
      if (eat('^')) e = static_cast<unsigned>(std::stoul(digits()));
      mono[v - 1] += e;
      max_var = std::max(max_var, v);
      return;
    }
    std::string num = digits();
    if (eat('/')) num += "/" + digits();
    coef *= Scalar::parse(field, num);
  }

  void term(bool negative) {
    std::map<std::size_t, unsigned> mono;
    Scalar coef = Scalar::one(field);
    factor(mono, coef);
    while (eat('*')) factor(mono, coef);
    terms.push_back({mono, negative ? -coef : coef});
  }

  void parse() {
    bool neg = eat('-');
    term(neg);
    for (;;) {
      if (eat('+')) term(false);
      else if (eat('-')) term(true);
      else break;
    }
    skip();
    if (pos != s.size()) error("unexpected character");
  }
};

}  // namespace

MultiPoly parse_poly_text(const std::string& text, FieldId field, std::size_t nvars) {
  PolyParser p{text, field, 0, {}, 0};
  p.parse();
  if (nvars == 0) nvars = p.max_var;
  MLV_REQUIRE(p.max_var <= nvars, ErrorCode::MalformedInput, "polynomial uses more than " + std::to_string(nvars) + " variables");
  MLV_REQUIRE(nvars > 0, ErrorCode::MalformedInput, "polynomial has no variables");
  const VarBlocks blocks = VarBlocks::single(nvars);
  std::vector<Term> terms;
  for (const auto& [mono, coef] : p.terms) {
    Monomial m(nvars);
    for (const auto& [v, e] : mono) m.set(v, e);
    terms.push_back({m, coef});
  }
  return MultiPoly::from_terms(field, blocks, std::move(terms));
}

}  // namespace mlv::cli
