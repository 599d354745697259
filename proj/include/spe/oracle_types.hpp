#pragma once

#include <functional>

#include "spe/extended_game.hpp"

namespace spe {

/**
 * A strategy profile for the extended game encoded as one finite-state
 * machine: `update` advances the memory on every move (deviating or not),
 * `move` picks the successor the profile prescribes at a vertex. Memory
 * states are 0..memory_count-1.
 */
struct FiniteMemoryProfile {
    int memory_count = 1;
    int initial_memory = 0;
    std::function<int(int mem, int entered_ext_vertex)> update;
    std::function<int(int mem, int ext_vertex)> move;
};

}  // namespace spe
