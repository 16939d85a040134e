#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "chanent/channel.hpp"

namespace chanent {

// Channel JSON schema:
//   {"kind":"kraus","dim_in":n,"dim_out":m,"ops":[matrix,...]}
//   {"kind":"named","name":"...","params":{...},"seed":u64}
// Matrices are row-major nested arrays; complex numbers are [re, im] pairs.
// Unknown extra keys are ignored on input.

ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

Channel channel_from_json(const nlohmann::json& j);

// Serialized with kind = "kraus" (Kraus operators derived from the Choi
// matrix when the channel holds none).
nlohmann::json channel_to_json(const Channel& phi);

// Named constructors addressable from JSON / the command line:
//   identity             {d}
//   unitary              {matrix} explicit, or {d} Haar-sampled from seed
//   depolarizing         {d}
//   partial_depolarizing {d, q}
//   pauli_mixture        {q: [q0, q1, q2, q3]}
//   amplitude_damping    {gamma}
//   random               {d, k (default d^2)}, uses seed
//   random_unitary_mixture {d, m, weights (default uniform)}, uses seed
Channel named_channel(const std::string& name, const nlohmann::json& params,
                      std::uint64_t seed);

}  // namespace chanent
