#pragma once

#include <filesystem>

#include "json.hpp"
#include "tpslab/numkernel.hpp"
#include "tpslab/tps.hpp"

namespace tpslab {

using Json = nlohmann::json;

/// {"rows": n, "cols": m, "entries": [[re, im], ...]} in row-major order.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

/// {"factor_dims": [...], "frame": <matrix>}; a missing frame means identity.
Json tps_to_json(const TensorProductStructure& tps);
TensorProductStructure tps_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);

}  // namespace tpslab
