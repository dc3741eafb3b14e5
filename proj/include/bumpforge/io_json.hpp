#pragma once

// Certificate and analysis JSON: schema "bumpforge-cert/1". Polynomial terms
// serialize as [a1, b1, a2, b2, reNum, reDen, imNum, imDen] with string
// fallbacks for numerators/denominators beyond 64 bits.

#include <string>

#include "json.hpp"

#include "bumpforge/pipeline.hpp"

namespace bumpforge {

nlohmann::json poly_to_json(const MixedPolynomial& p);
MixedPolynomial poly_from_json(const nlohmann::json& j);

nlohmann::json cert_to_json(const BumpCertificate& cert);
BumpCertificate cert_from_json(const nlohmann::json& j);

nlohmann::json analysis_to_json(const AnalyzeResult& res);

std::string classification_name(Classification::V v);

}  // namespace bumpforge
