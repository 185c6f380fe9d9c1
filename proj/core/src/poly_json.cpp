#include "mlv/poly_json.hpp"

namespace mlv {

nlohmann::json scalar_to_json(const Scalar& s) { return s.to_string(); }

Scalar scalar_from_json(FieldId field, const nlohmann::json& j) {
  if (j.is_string()) return Scalar::parse(field, j.get<std::string>());
  if (j.is_number_integer()) return Scalar(field, j.get<long>());
  fail(ErrorCode::MalformedInput, "scalar must be a string or integer");
}

nlohmann::json poly_to_json(const MultiPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : p.terms()) terms.push_back({{"exp", t.mono.exponents()}, {"coef", scalar_to_json(t.coef)}});
  return {{"schema", "1"}, {"blocks", p.blocks().sizes()}, {"field", p.field().to_string()}, {"terms", terms}};
}

MultiPoly poly_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("blocks") || !j.contains("field") || !j.contains("terms"))
      fail(ErrorCode::MalformedInput, "polynomial needs blocks, field and terms");
    const FieldId field = FieldId::parse(j.at("field").get<std::string>());
    const VarBlocks blocks(j.at("blocks").get<std::vector<std::size_t>>());
    std::vector<Term> terms;
    for (const auto& t : j.at("terms")) {
      const auto exps = t.at("exp").get<std::vector<unsigned>>();
      MLV_REQUIRE(exps.size() == blocks.total(), ErrorCode::MalformedInput, "exponent vector has wrong length");
      terms.push_back({Monomial::from_exponents(exps), scalar_from_json(field, t.at("coef"))});
    }
    return MultiPoly::from_terms(field, blocks, std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::MalformedInput, e.what());
  }
}

}  // namespace mlv
