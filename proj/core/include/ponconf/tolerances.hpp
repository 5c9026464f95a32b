#pragma once

#include <string>
#include <string_view>

namespace ponconf {

// One record for every threshold in the library; callers pass it down explicitly.
struct Tolerances {
    double incidence = 1e-9;     // point-on-line / point-on-conic after normalisation
    double rank_cutoff = 1e-8;   // relative singular value cutoff
    double closure = 1e-7;       // polygon / construction closure
    double coincidence = 1e-6;   // two elements considered the same
    double degenerate = 1e-12;   // join/meet of (numerically) identical inputs
    double degenerate_conic = 1e-10;
    double incircle = 1e-8;       // least-squares residual of the equal-distance system

    static Tolerances defaults() { return {}; }

    // "closure=1e-6,coincidence=1e-5"; unknown keys or bad numbers throw Error(InvalidArgument)
    static Tolerances parse(std::string_view spec, Tolerances base);
    static Tolerances parse(std::string_view spec);
    // Applies PONCELET_TOL when set.
    static Tolerances from_env(Tolerances base);
    static Tolerances from_env();

    std::string to_string() const;
};

}  // namespace ponconf
