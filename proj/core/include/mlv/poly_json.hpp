#pragma once

#include <nlohmann/json.hpp>

#include "mlv/multipoly.hpp"

namespace mlv {

/// {"schema":"1","blocks":[...],"field":"Q"|"F:p","terms":[{"exp":[...],"coef":"a/b"}]}
/// with terms in canonical (ascending lex) order.
nlohmann::json poly_to_json(const MultiPoly& p);
/// MalformedInput on structural errors.
MultiPoly poly_from_json(const nlohmann::json& j);

nlohmann::json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(FieldId field, const nlohmann::json& j);

}  // namespace mlv
