#include "mlv/tensor.hpp"

#include <algorithm>
#include <map>

#include "mlv/poly_json.hpp"

namespace mlv {

namespace {

constexpr std::size_t kMaxTensorCells = 20'000'000;

bool has_affine_slot(std::span<const std::size_t> idx) {
  return std::find(idx.begin(), idx.end(), std::size_t{0}) != idx.end();
}

std::vector<std::size_t> drop(std::span<const std::size_t> idx, std::size_t j) {
  std::vector<std::size_t> out;
  out.reserve(idx.size() - 1);
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (i != j) out.push_back(idx[i]);
  return out;
}

std::vector<std::size_t> drop_size(const VarBlocks& b, std::size_t j) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < b.num_blocks(); ++i)
    if (i != j) out.push_back(b.size(i));
  return out;
}

}  // namespace

Tensor::Tensor(FieldId field, VarBlocks shape, std::size_t m, bool homogeneous)
    : field_(field), shape_(std::move(shape)), m_(m), homogeneous_(homogeneous) {
  MLV_REQUIRE(m >= 1, ErrorCode::ShapeMismatch, "codomain dimension must be positive");
  const std::size_t d = shape_.num_blocks();
  strides_.assign(d, 0);
  std::size_t s = m;
  for (std::size_t j = d; j-- > 0;) {
    strides_[j] = s;
    s *= shape_.size(j) + 1;
    MLV_REQUIRE(s <= kMaxTensorCells, ErrorCode::SizeError, "tensor too large for dense storage");
  }
  data_.assign(s, Scalar(field));
}

Tensor Tensor::from_data(FieldId field, VarBlocks shape, std::size_t m, bool homogeneous, std::vector<Scalar> data) {
  Tensor t(field, std::move(shape), m, homogeneous);
  MLV_REQUIRE(data.size() == t.data_.size(), ErrorCode::ShapeMismatch, "raw tensor storage has the wrong size");
  t.data_ = std::move(data);
  if (homogeneous)
    MLV_REQUIRE(t.entries_are_multilinear(), ErrorCode::NotHomogeneous, "affine entries in a homogeneous tensor");
  return t;
}

std::size_t Tensor::offset(std::span<const std::size_t> idx, std::size_t out) const {
  MLV_REQUIRE(idx.size() == num_blocks(), ErrorCode::ShapeMismatch, "index has the wrong number of blocks");
  MLV_REQUIRE(out < m_, ErrorCode::ShapeMismatch, "output index out of range");
  std::size_t off = out;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    MLV_REQUIRE(idx[j] <= shape_.size(j), ErrorCode::ShapeMismatch, "block index out of range");
    off += idx[j] * strides_[j];
  }
  return off;
}

void Tensor::set(std::span<const std::size_t> idx, std::size_t out, const Scalar& value) {
  if (value.field() != field_) fail(ErrorCode::FieldMismatch, "entry field differs from tensor field");
  const std::size_t off = offset(idx, out);
  if (homogeneous_ && !value.is_zero() && has_affine_slot(idx))
    fail(ErrorCode::NotHomogeneous, "affine entry in a homogeneous tensor");
  data_[off] = value;
}

void Tensor::add(std::span<const std::size_t> idx, std::size_t out, const Scalar& value) {
  const std::size_t off = offset(idx, out);
  set(idx, out, data_[off] + value);
}

bool Tensor::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

bool Tensor::entries_are_multilinear() const {
  bool ok = true;
  for_each_index([&](std::span<const std::size_t> idx) {
    if (!ok || !has_affine_slot(idx)) return;
    const std::size_t base = offset(idx, 0);
    for (std::size_t o = 0; o < m_; ++o)
      if (!data_[base + o].is_zero()) ok = false;
  });
  return ok;
}

Tensor operator+(const Tensor& a, const Tensor& b) {
  if (a.field_ != b.field_) fail(ErrorCode::FieldMismatch, "tensors over different fields");
  MLV_REQUIRE(a.shape_ == b.shape_ && a.m_ == b.m_, ErrorCode::ShapeMismatch, "tensor sum needs equal shapes");
  Tensor r(a.field_, a.shape_, a.m_, a.homogeneous_ && b.homogeneous_);
  for (std::size_t i = 0; i < a.data_.size(); ++i) r.data_[i] = a.data_[i] + b.data_[i];
  return r;
}

Tensor operator*(const Scalar& c, const Tensor& t) {
  Tensor r = t;
  for (auto& x : r.data_) x *= c;
  return r;
}

Tensor contract(const Tensor& t, std::size_t j, std::span<const Scalar> w) {
  MLV_REQUIRE(j < t.num_blocks(), ErrorCode::ShapeMismatch, "contracted block out of range");
  MLV_REQUIRE(w.size() == t.size(j), ErrorCode::ShapeMismatch,
              "vector length " + std::to_string(w.size()) + " differs from block size " + std::to_string(t.size(j)));
  std::vector<Scalar> wt;
  wt.reserve(w.size() + 1);
  wt.push_back(Scalar::one(t.field()));
  for (const auto& x : w) {
    if (x.field() != t.field()) fail(ErrorCode::FieldMismatch, "vector field differs from tensor field");
    wt.push_back(x);
  }
  const auto rest = drop_size(t.blocks(), j);
  Tensor r(t.field(), rest.empty() ? VarBlocks() : VarBlocks(rest), t.m(), t.homogeneous());
  std::vector<Scalar> acc(r.data().size(), Scalar(t.field()));
  const auto& src = t.data();
  t.for_each_index([&](std::span<const std::size_t> idx) {
    const Scalar& f = wt[idx[j]];
    if (f.is_zero()) return;
    const std::size_t so = t.offset(idx, 0);
    const std::size_t dst = r.offset(drop(idx, j), 0);
    for (std::size_t o = 0; o < t.m(); ++o)
      if (!src[so + o].is_zero()) acc[dst + o] += src[so + o] * f;
  });
  return Tensor::from_data(t.field(), r.blocks(), t.m(), t.homogeneous(), std::move(acc));
}

std::vector<Scalar> eval_tensor(const Tensor& t, const BlockPoint& v) {
  MLV_REQUIRE(v.size() == t.num_blocks(), ErrorCode::ShapeMismatch,
              "point has " + std::to_string(v.size()) + " blocks, tensor has " + std::to_string(t.num_blocks()));
  for (std::size_t j = 0; j < v.size(); ++j)
    MLV_REQUIRE(v[j].size() == t.size(j), ErrorCode::ShapeMismatch, "point block " + std::to_string(j) + " has wrong length");
  Tensor cur = t;
  for (std::size_t j = t.num_blocks(); j-- > 0;) cur = contract(cur, j, v[j]);
  return cur.data();
}

Tensor direct_sum(const Tensor& a, const Tensor& b) {
  if (a.field() != b.field()) fail(ErrorCode::FieldMismatch, "tensors over different fields");
  MLV_REQUIRE(a.num_blocks() == b.num_blocks(), ErrorCode::ArityMismatch, "direct sum needs equal block counts");
  const bool forms = a.m() == 1 && b.m() == 1;
  MLV_REQUIRE(forms || (a.m() > 1 && b.m() > 1), ErrorCode::ArityMismatch,
              "direct sum of a form and a map is undefined");
  const std::size_t d = a.num_blocks();
  std::vector<std::size_t> sizes(d);
  for (std::size_t j = 0; j < d; ++j) sizes[j] = a.size(j) + b.size(j);
  const std::size_t m = forms ? 1 : a.m() + b.m();
  Tensor r(a.field(), d == 0 ? VarBlocks() : VarBlocks(sizes), m, a.homogeneous() && b.homogeneous());
  auto embed = [&](const Tensor& src, bool second) {
    src.for_each_index([&](std::span<const std::size_t> idx) {
      std::vector<std::size_t> ni(idx.begin(), idx.end());
      if (second)
        for (std::size_t j = 0; j < d; ++j)
          if (ni[j] != 0) ni[j] += a.size(j);
      for (std::size_t o = 0; o < src.m(); ++o) {
        const Scalar& x = src.at(idx, o);
        if (!x.is_zero()) r.add(ni, (second && !forms) ? o + a.m() : o, x);
      }
    });
  };
  embed(a, false);
  embed(b, true);
  return r;
}

Tensor restrict_tensor(const Tensor& t, const std::vector<ScalarMatrix>& maps) {
  MLV_REQUIRE(maps.size() == t.num_blocks(), ErrorCode::ShapeMismatch, "one map per block is required");
  Tensor cur = t;
  // Apply one block at a time: new[.., k, ..] = sum_s cur[.., s, ..] * A_hat[s][k].
  for (std::size_t j = 0; j < maps.size(); ++j) {
    const ScalarMatrix& A = maps[j];
    MLV_REQUIRE(A.rows() == cur.size(j), ErrorCode::ShapeMismatch,
                "map " + std::to_string(j) + " must have " + std::to_string(cur.size(j)) + " rows");
    MLV_REQUIRE(A.cols() >= 1, ErrorCode::ShapeMismatch, "target blocks must be nonempty");
    if (A.field() != t.field()) fail(ErrorCode::FieldMismatch, "map field differs from tensor field");
    std::vector<std::size_t> sizes = cur.blocks().sizes();
    sizes[j] = A.cols();
    Tensor next(t.field(), VarBlocks(sizes), t.m(), t.homogeneous());
    std::vector<Scalar> acc(next.data().size(), Scalar(t.field()));
    cur.for_each_index([&](std::span<const std::size_t> idx) {
      const std::size_t so = cur.offset(idx, 0);
      std::vector<std::size_t> ni(idx.begin(), idx.end());
      auto push = [&](std::size_t k, const Scalar& f) {
        ni[j] = k;
        const std::size_t dst = next.offset(ni, 0);
        for (std::size_t o = 0; o < t.m(); ++o)
          if (!cur.data()[so + o].is_zero()) acc[dst + o] += cur.data()[so + o] * f;
      };
      if (idx[j] == 0) {
        push(0, Scalar::one(t.field()));
      } else {
        for (std::size_t k = 0; k < A.cols(); ++k)
          if (!A(idx[j] - 1, k).is_zero()) push(k + 1, A(idx[j] - 1, k));
      }
    });
    cur = Tensor::from_data(t.field(), next.blocks(), t.m(), t.homogeneous(), std::move(acc));
  }
  return cur;
}

Tensor polarize(const MultiPoly& p) {
  MLV_REQUIRE(!p.is_zero(), ErrorCode::NotHomogeneous, "degree of the zero polynomial is undefined; pass it explicitly");
  return polarize(p, p.total_degree());
}

Tensor polarize(const MultiPoly& p, unsigned degree) {
  const FieldId f = p.field();
  MLV_REQUIRE(degree >= 1, ErrorCode::NotHomogeneous, "polarization needs positive degree");
  MLV_REQUIRE(f.is_rationals() || f.modulus() > degree, ErrorCode::BadCharacteristic,
              "polarization needs characteristic 0 or > " + std::to_string(degree));
  for (const auto& t : p.terms())
    MLV_REQUIRE(t.mono.degree() == degree, ErrorCode::NotHomogeneous,
                "term " + t.mono.to_string() + " is not of degree " + std::to_string(degree));
  const std::size_t n = p.nvars();
  MLV_REQUIRE(n >= 1, ErrorCode::NotHomogeneous, "polarization needs at least one variable");
  Tensor out(f, VarBlocks(std::vector<std::size_t>(degree, n)), 1, true);
  auto factorial = [&](unsigned k) {
    Scalar r = Scalar::one(f);
    for (unsigned i = 2; i <= k; ++i) r *= Scalar(f, static_cast<long>(i));
    return r;
  };
  const Scalar inv_dfact = factorial(degree).inverse();
  // Enumerate every sequence (a_1..a_d) of variables per term.
  for (const auto& t : p.terms()) {
    Scalar w = t.coef * inv_dfact;
    std::vector<std::size_t> letters;
    for (std::size_t v = 0; v < n; ++v) {
      w *= factorial(t.mono[v]);
      for (unsigned e = 0; e < t.mono[v]; ++e) letters.push_back(v);
    }
    std::sort(letters.begin(), letters.end());
    do {
      std::vector<std::size_t> idx(degree);
      for (unsigned k = 0; k < degree; ++k) idx[k] = letters[k] + 1;
      out.set(idx, 0, w);
    } while (std::next_permutation(letters.begin(), letters.end()));
  }
  return out;
}

std::size_t flattening_rank(const Tensor& t, std::size_t j) {
  MLV_REQUIRE(t.is_form(), ErrorCode::NotForm, "flattening rank needs a homogeneous form");
  MLV_REQUIRE(j < t.num_blocks(), ErrorCode::ShapeMismatch, "block out of range");
  std::size_t cols = 1;
  for (std::size_t i = 0; i < t.num_blocks(); ++i)
    if (i != j) cols *= t.size(i);
  ScalarMatrix mat(t.size(j), cols, t.field());
  t.for_each_index([&](std::span<const std::size_t> idx) {
    if (has_affine_slot(idx)) return;
    const Scalar& x = t.at(idx, 0);
    if (x.is_zero()) return;
    std::size_t c = 0;
    for (std::size_t i = 0; i < t.num_blocks(); ++i)
      if (i != j) c = c * t.size(i) + (idx[i] - 1);
    mat(idx[j] - 1, c) = x;
  });
  return rank(mat);
}

Tensor slice_system(const Tensor& f, std::size_t j) {
  MLV_REQUIRE(f.is_form(), ErrorCode::NotForm, "slice system needs a homogeneous form");
  MLV_REQUIRE(j < f.num_blocks(), ErrorCode::ShapeMismatch, "sliced block out of range");
  const auto rest = drop_size(f.blocks(), j);
  Tensor out(f.field(), rest.empty() ? VarBlocks() : VarBlocks(rest), f.size(j), true);
  f.for_each_index([&](std::span<const std::size_t> idx) {
    if (idx[j] == 0) return;
    const Scalar& x = f.at(idx, 0);
    if (!x.is_zero()) out.set(drop(idx, j), idx[j] - 1, x);
  });
  return out;
}

std::vector<MultiPoly> tensor_to_polys(const Tensor& t) {
  const VarBlocks& b = t.blocks();
  std::vector<std::vector<Term>> terms(t.m());
  t.for_each_index([&](std::span<const std::size_t> idx) {
    Monomial mono(b.total());
    bool built = false;
    for (std::size_t o = 0; o < t.m(); ++o) {
      const Scalar& x = t.at(idx, o);
      if (x.is_zero()) continue;
      if (!built) {
        for (std::size_t j = 0; j < idx.size(); ++j)
          if (idx[j] != 0) mono.set(b.var(j, idx[j] - 1), 1);
        built = true;
      }
      terms[o].push_back({mono, x});
    }
  });
  std::vector<MultiPoly> out;
  for (auto& ts : terms) out.push_back(MultiPoly::from_terms(t.field(), b, std::move(ts)));
  return out;
}

Tensor tensor_from_polys(const std::vector<MultiPoly>& polys) {
  MLV_REQUIRE(!polys.empty(), ErrorCode::ShapeMismatch, "at least one component is required");
  const VarBlocks& b = polys.front().blocks();
  const FieldId f = polys.front().field();
  bool multilinear = true;
  for (const auto& p : polys) {
    if (p.field() != f) fail(ErrorCode::FieldMismatch, "components over different fields");
    if (p.blocks() != b) fail(ErrorCode::BlockMismatch, "components in different rings");
    for (const auto& t : p.terms()) {
      for (std::size_t j = 0; j < b.num_blocks(); ++j) {
        unsigned d = 0;
        for (std::size_t s = 0; s < b.size(j); ++s) d += t.mono[b.var(j, s)];
        MLV_REQUIRE(d <= 1, ErrorCode::BadParams, "term " + t.mono.to_string() + " has block degree above 1");
        if (d == 0) multilinear = false;
      }
    }
  }
  Tensor out(f, b, polys.size(), multilinear);
  for (std::size_t o = 0; o < polys.size(); ++o) {
    for (const auto& t : polys[o].terms()) {
      std::vector<std::size_t> idx(b.num_blocks(), 0);
      for (std::size_t v = 0; v < b.total(); ++v)
        if (t.mono[v] != 0) idx[b.block_of(v)] = v - b.offset(b.block_of(v)) + 1;
      out.set(idx, o, t.coef);
    }
  }
  return out;
}

Tensor gen_diag(FieldId field, std::size_t d, std::size_t r, std::size_t n) {
  MLV_REQUIRE(d >= 1 && n >= 1 && r <= n, ErrorCode::BadParams, "diag needs d >= 1, n >= 1 and r <= n");
  Tensor t(field, VarBlocks(std::vector<std::size_t>(d, n)), 1, true);
  for (std::size_t i = 1; i <= r; ++i) t.set(std::vector<std::size_t>(d, i), 0, Scalar::one(field));
  return t;
}

Tensor gen_matmul_form(FieldId field, std::size_t r) {
  MLV_REQUIRE(r >= 1, ErrorCode::BadParams, "matmul needs r >= 1");
  const std::size_t n = r * r;
  Tensor t(field, VarBlocks({n, n, n}), 1, true);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t c = 0; c < r; ++c)
        t.set(std::vector<std::size_t>{a * r + b + 1, b * r + c + 1, c * r + a + 1}, 0, Scalar::one(field));
  return t;
}

Tensor gen_matmul_map(FieldId field, std::size_t r) {
  MLV_REQUIRE(r >= 1, ErrorCode::BadParams, "matmul needs r >= 1");
  const std::size_t n = r * r;
  Tensor t(field, VarBlocks({n, n}), n, true);
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      for (std::size_t c = 0; c < r; ++c)
        t.set(std::vector<std::size_t>{a * r + b + 1, b * r + c + 1}, a * r + c, Scalar::one(field));
  return t;
}

Tensor gen_quaternion(FieldId field, const Scalar& a, const Scalar& b) {
  MLV_REQUIRE(!a.is_zero() && !b.is_zero(), ErrorCode::BadParams, "quaternion parameters must be nonzero");
  if (a.field() != field || b.field() != field) fail(ErrorCode::FieldMismatch, "parameters over a different field");
  const Scalar one = Scalar::one(field);
  // table[p][q] = (coefficient, basis index) of e_p * e_q.
  struct Prod {
    Scalar c;
    std::size_t e;
  };
  const Prod table[4][4] = {
      {{one, 0}, {one, 1}, {one, 2}, {one, 3}},
      {{one, 1}, {a, 0}, {one, 3}, {a, 2}},
      {{one, 2}, {-one, 3}, {b, 0}, {-b, 1}},
      {{one, 3}, {-a, 2}, {b, 1}, {-(a * b), 0}},
  };
  Tensor t(field, VarBlocks({4, 4}), 4, true);
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t q = 0; q < 4; ++q)
      t.set(std::vector<std::size_t>{p + 1, q + 1}, table[p][q].e, table[p][q].c);
  return t;
}

Tensor gen_random(FieldId field, const VarBlocks& shape, std::size_t m, std::uint64_t seed, double density) {
  MLV_REQUIRE(density >= 0.0 && density <= 1.0, ErrorCode::BadParams, "density must lie in [0, 1]");
  Tensor t(field, shape, m, true);
  Rng rng(seed);
  std::vector<std::pair<std::vector<std::size_t>, std::size_t>> cells;
  t.for_each_index([&](std::span<const std::size_t> idx) {
    if (has_affine_slot(idx)) return;
    for (std::size_t o = 0; o < m; ++o) cells.emplace_back(std::vector<std::size_t>(idx.begin(), idx.end()), o);
  });
  for (const auto& [idx, o] : cells) {
    if (!rng.bernoulli(density)) continue;
    Scalar v(field);
    if (field.is_rationals()) {
      long x = 0;
      while (x == 0) x = rng.uniform(-5, 5);
      v = Scalar(field, x);
    } else {
      v = sample_nonzero_scalar(field, 1, rng);
    }
    t.set(idx, o, v);
  }
  return t;
}

nlohmann::json tensor_to_json(const Tensor& t) {
  nlohmann::json entries = nlohmann::json::array();
  t.for_each_index([&](std::span<const std::size_t> idx) {
    for (std::size_t o = 0; o < t.m(); ++o) {
      const Scalar& x = t.at(idx, o);
      if (x.is_zero()) continue;
      std::vector<std::size_t> full(idx.begin(), idx.end());
      full.push_back(o);
      entries.push_back({{"idx", full}, {"coef", scalar_to_json(x)}});
    }
  });
  return {{"schema", "1"},
          {"shape", t.blocks().sizes()},
          {"m", t.m()},
          {"field", t.field().to_string()},
          {"homogeneous", t.homogeneous()},
          {"entries", entries}};
}

Tensor tensor_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object()) fail(ErrorCode::MalformedInput, "tensor must be a JSON object");
    if (j.contains("schema") && j.at("schema") != "1") fail(ErrorCode::MalformedInput, "unsupported tensor schema");
    const FieldId field = FieldId::parse(j.at("field").get<std::string>());
    const auto shape = j.at("shape").get<std::vector<std::size_t>>();
    const std::size_t m = j.at("m").get<std::size_t>();
    const bool homogeneous = j.value("homogeneous", true);
    Tensor t(field, shape.empty() ? VarBlocks() : VarBlocks(shape), m, homogeneous);
    for (const auto& e : j.at("entries")) {
      auto idx = e.at("idx").get<std::vector<std::size_t>>();
      MLV_REQUIRE(idx.size() == shape.size() + 1, ErrorCode::MalformedInput, "entry index has the wrong length");
      const std::size_t out = idx.back();
      idx.pop_back();
      t.add(idx, out, scalar_from_json(field, e.at("coef")));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::MalformedInput, e.what());
  }
}

BlockPoint split_point(const VarBlocks& blocks, std::span<const Scalar> flat) {
  MLV_REQUIRE(flat.size() == blocks.total(), ErrorCode::ShapeMismatch, "flat point has the wrong length");
  BlockPoint v(blocks.num_blocks());
  for (std::size_t j = 0; j < blocks.num_blocks(); ++j)
    v[j].assign(flat.begin() + static_cast<std::ptrdiff_t>(blocks.offset(j)),
                flat.begin() + static_cast<std::ptrdiff_t>(blocks.offset(j) + blocks.size(j)));
  return v;
}

std::vector<Scalar> flatten_point(const BlockPoint& v) {
  std::vector<Scalar> out;
  for (const auto& b : v) out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace mlv
