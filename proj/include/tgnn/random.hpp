#pragma once

#include <random>

namespace tgnn {

// Seeded generator used everywhere randomness enters (init, dropout, data).
using Rng = std::mt19937_64;

}  // namespace tgnn
