#pragma once

#include <nlohmann/json.hpp>

#include "lotto/types.hpp"

namespace lotto {

// Instance wire format: {n, w, q, P, R_A, R_B} plus "p" when a
// pre-allocation travels with it.

inline nlohmann::json instance_to_json(const GameInstance& inst) {
  return nlohmann::json{{"n", inst.n}, {"w", inst.w},   {"q", inst.q},
                        {"P", inst.P}, {"R_A", inst.RA}, {"R_B", inst.RB}};
}

inline GameInstance instance_from_json(const nlohmann::json& j) {
  auto w = j.at("w").get<std::vector<double>>();
  if (j.contains("n") && j.at("n").get<int>() != static_cast<int>(w.size()))
    throw Error(Errc::EmptyBattlefields, "n does not match w length");
  return make_instance(std::move(w), j.at("q").get<double>(),
                       j.at("P").get<double>(), j.at("R_A").get<double>(),
                       j.at("R_B").get<double>());
}

inline nlohmann::json preallocation_to_json(const GameInstance& inst,
                                            const PreAllocation& p) {
  nlohmann::json j = instance_to_json(inst);
  j["p"] = p.p;
  return j;
}

inline PreAllocation preallocation_from_json(const GameInstance& inst,
                                             const nlohmann::json& j) {
  return make_preallocation(inst, j.at("p").get<std::vector<double>>());
}

}  // namespace lotto
