#include "tpslab/io.hpp"

#include <cmath>
#include <fstream>

namespace tpslab {

Json matrix_to_json(const ComplexMatrix& m) {
  Json entries = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) entries.push_back({m(i, j).real(), m(i, j).imag()});
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  try {
    const auto rows = j.at("rows").get<Index>();
    const auto cols = j.at("cols").get<Index>();
    const auto& entries = j.at("entries");
    if (rows < 1 || cols < 1) throw Error(ErrorKind::DimensionMismatch, "rows and cols must be positive");
    require_within_cap(rows, cols, kDefaultDimensionCap);
    if (!entries.is_array() || static_cast<Index>(entries.size()) != rows * cols) {
      throw Error(ErrorKind::DimensionMismatch, "entries length is not rows × cols");
    }
    ComplexMatrix m(rows, cols);
    for (Index k = 0; k < rows * cols; ++k) {
      const auto& e = entries[static_cast<std::size_t>(k)];
      if (!e.is_array() || e.size() != 2) {
        throw Error(ErrorKind::InvalidConfig, "entry " + std::to_string(k) + " is not [re, im]");
      }
      const std::complex<double> z(e[0].get<double>(), e[1].get<double>());
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorKind::InvalidConfig, "non-finite matrix entry");
      }
      m(k / cols, k % cols) = z;
    }
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("malformed matrix JSON: ") + e.what());
  }
}

Json tps_to_json(const TensorProductStructure& tps) {
  return {{"factor_dims", tps.factor_dims()}, {"frame", matrix_to_json(tps.frame())}};
}

TensorProductStructure tps_from_json(const Json& j) {
  std::vector<Index> dims;
  try {
    dims = j.at("factor_dims").get<std::vector<Index>>();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, std::string("malformed TPS JSON: ") + e.what());
  }
  if (!j.contains("frame")) return standard_tps(std::move(dims));
  validate_factor_dims(dims);
  return {std::move(dims), matrix_from_json(j.at("frame"))};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidConfig, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, path.string() + ": " + e.what());
  }
}

}  // namespace tpslab
