#include "chanent/channel_json.hpp"

#include <vector>

#include "chanent/errors.hpp"
#include "chanent/rng.hpp"

namespace chanent {

namespace {

using nlohmann::json;

constexpr std::uint64_t kTagNamedUnitary = 0x754a534e;

const json& require_key(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(std::string("channel JSON: missing key '") + key + "'");
  }
  return *it;
}

int get_int(const json& j, const char* key) {
  const json& v = require_key(j, key);
  if (!v.is_number_integer()) {
    throw ParseError(std::string("channel JSON: '") + key + "' must be an integer");
  }
  return v.get<int>();
}

int get_int_or(const json& j, const char* key, int fallback) {
  return j.contains(key) ? get_int(j, key) : fallback;
}

double get_double(const json& j, const char* key) {
  const json& v = require_key(j, key);
  if (!v.is_number()) {
    throw ParseError(std::string("channel JSON: '") + key + "' must be a number");
  }
  return v.get<double>();
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) {
    throw ParseError("channel JSON: matrix must be a nonempty array of rows");
  }
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    throw ParseError("channel JSON: matrix rows must be nonempty arrays");
  }
  const std::size_t cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ParseError("channel JSON: ragged matrix rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const json& z = j[r][c];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() ||
          !z[1].is_number()) {
        throw ParseError("channel JSON: complex entries must be [re, im] pairs");
      }
      m(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Channel channel_from_json(const json& j) {
  if (!j.is_object()) {
    throw ParseError("channel JSON: expected an object");
  }
  const json& kind = require_key(j, "kind");
  if (kind == "kraus") {
    const int dim_in = get_int(j, "dim_in");
    const int dim_out = get_int(j, "dim_out");
    const json& ops = require_key(j, "ops");
    if (!ops.is_array() || ops.empty()) {
      throw ParseError("channel JSON: 'ops' must be a nonempty array");
    }
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(ops.size());
    for (const json& op : ops) {
      ComplexMatrix k = matrix_from_json(op);
      if (k.rows() != dim_out || k.cols() != dim_in) {
        throw ParseError("channel JSON: Kraus operator shape does not match dims");
      }
      kraus.push_back(std::move(k));
    }
    return channel_from_kraus(std::move(kraus));
  }
  if (kind == "named") {
    const json& name = require_key(j, "name");
    if (!name.is_string()) {
      throw ParseError("channel JSON: 'name' must be a string");
    }
    const json params = j.contains("params") ? j["params"] : json::object();
    const std::uint64_t seed =
        j.contains("seed") ? j["seed"].get<std::uint64_t>() : kDefaultSeed;
    return named_channel(name.get<std::string>(), params, seed);
  }
  throw ParseError("channel JSON: 'kind' must be \"kraus\" or \"named\"");
}

json channel_to_json(const Channel& phi) {
  json j;
  j["kind"] = "kraus";
  j["dim_in"] = phi.dim_in;
  j["dim_out"] = phi.dim_out;
  json ops = json::array();
  for (const ComplexMatrix& k : kraus_operators(phi)) {
    ops.push_back(matrix_to_json(k));
  }
  j["ops"] = std::move(ops);
  return j;
}

Channel named_channel(const std::string& name, const json& params,
                      std::uint64_t seed) {
  if (!params.is_object()) {
    throw ParseError("channel JSON: 'params' must be an object");
  }
  if (name == "identity") {
    return identity_channel(get_int(params, "d"));
  }
  if (name == "unitary") {
    if (params.contains("matrix")) {
      return unitary_channel(matrix_from_json(params["matrix"]));
    }
    const int d = get_int(params, "d");
    if (d <= 0) throw InvalidParameter("unitary: d must be positive");
    auto rng = substream(seed, kTagNamedUnitary);
    return unitary_channel(random_unitary(d, rng));
  }
  if (name == "depolarizing") {
    return depolarizing_channel(get_int(params, "d"));
  }
  if (name == "partial_depolarizing") {
    return partial_depolarizing_channel(get_int(params, "d"),
                                        get_double(params, "q"));
  }
  if (name == "pauli_mixture") {
    const json& q = require_key(params, "q");
    if (!q.is_array() || q.size() != 4) {
      throw ParseError("pauli_mixture: 'q' must be an array of 4 weights");
    }
    return pauli_mixture_channel(q[0].get<double>(), q[1].get<double>(),
                                 q[2].get<double>(), q[3].get<double>());
  }
  if (name == "amplitude_damping") {
    return amplitude_damping_channel(get_double(params, "gamma"));
  }
  if (name == "random") {
    const int d = get_int(params, "d");
    return random_channel(d, get_int_or(params, "k", d * d), seed);
  }
  if (name == "random_unitary_mixture") {
    const int d = get_int(params, "d");
    const int m = get_int(params, "m");
    std::vector<double> weights;
    if (params.contains("weights")) {
      for (const json& w : params["weights"]) weights.push_back(w.get<double>());
    }
    return random_unitary_mixture_channel(d, m, weights, seed);
  }
  throw InvalidParameter("unknown named channel '" + name + "'");
}

}  // namespace chanent
