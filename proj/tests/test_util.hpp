#pragma once

#include "hardy/catalog.hpp"

namespace testutil {

// Default-size context and catalog, built once per test binary.
inline const hardy::LabContext& ctx() {
    static const hardy::LabContext c = hardy::LabContext::make();
    return c;
}

inline const hardy::Catalog& catalog() {
    static const hardy::Catalog c = hardy::build_catalog(ctx(), 20240613ull);
    return c;
}

inline std::shared_ptr<const hardy::CircleGrid> grid() { return ctx().grid; }

// Reduced-size context for tests that sweep many configurations.
inline const hardy::LabContext& small_ctx() {
    static const hardy::LabContext c = hardy::LabContext::make(1024, 7, 32, 6, 64, 5, 32, 96, 256);
    return c;
}

inline const hardy::WeightFn& unit_weight() { return catalog().weights[0]; }

} // namespace testutil
