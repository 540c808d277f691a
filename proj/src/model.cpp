#include "ladderjc/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ladderjc {

void ModelParams::validate() const {
    if (!std::isfinite(omega_c) || !std::isfinite(omega_0) || !std::isfinite(g)) {
        throw std::invalid_argument("ModelParams: frequencies and coupling must be finite");
    }
    if (g < 0.0) {
        throw std::invalid_argument("ModelParams: coupling g must be non-negative");
    }
}

AtomicPreparation AtomicPreparation::level(AtomicLevel l) {
    return level(static_cast<int>(l));
}

AtomicPreparation AtomicPreparation::level(int l) {
    if (l < 1 || l > 3) {
        throw std::invalid_argument("AtomicPreparation: level must be 1, 2 or 3, got " + std::to_string(l));
    }
    AtomicPreparation prep;
    prep.weights[static_cast<std::size_t>(l - 1)] = 1.0;
    return prep;
}

AtomicPreparation AtomicPreparation::superposition(complex w1, complex w2, complex w3) {
    AtomicPreparation prep;
    prep.weights = {w1, w2, w3};
    return prep;
}

double AtomicPreparation::norm_squared() const noexcept {
    double s = 0.0;
    for (const auto& w : weights) s += std::norm(w);
    return s;
}

}  // namespace ladderjc
