#include "picoh/diffpoly.hpp"

namespace picoh {

DiffPoly DiffPoly::substituted(const std::map<int, DiffPoly>& images) const {
    std::map<DiffVar, DiffPoly> cache;
    auto factor = [&](const DiffVar& v) -> const DiffPoly& {
        auto it = cache.find(v);
        if (it != cache.end()) return it->second;
        DiffPoly f;
        auto im = images.find(v.idx);
        if (im == images.end()) f = DiffPoly::var(v.idx, v.der);
        else f = im->second.derived(v.der);
        return cache.emplace(v, std::move(f)).first->second;
    };
    DiffPoly r;
    for (const auto& [m, q] : t) {
        DiffPoly term = DiffPoly::constant(q);
        for (const auto& [v, p] : m) {
            const DiffPoly& f = factor(v);
            for (int s = 0; s < p; ++s) term = term * f;
        }
        r = r + term;
    }
    return r;
}

} // namespace picoh
