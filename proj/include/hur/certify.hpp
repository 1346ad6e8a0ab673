#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hur/hammerstein.hpp"

namespace hur {

struct VarRange {
    double lo = 0.0;
    double hi = 0.0;
};

/// Per-variable sampling ranges, indexed by Var. Unused variables may stay [0,0].
using SampleBox = std::array<VarRange, kVarCount>;

/// Sampled lower bound on the Lipschitz constant of `e` in `wrt`: the max of
/// |e(p) - e(p')| / |wrt - wrt'| over `samples` pairs that differ only in
/// `wrt`. Half the pairs are spread over the whole range, half are local
/// (log-uniform offsets) so that steep spots are found. Deterministic in seed.
double estimate_lipschitz(const Expression& e, Var wrt, const SampleBox& box, std::size_t samples,
                          std::uint64_t seed);

struct C7Estimate {
    double l1_num = 0.0;
    double l2_num = 0.0;
};

/// Weighted maxima of the two integral conditions bounding l_1 (Volterra,
/// prefix box) and l_2 (Fredholm, truncated to [0,R]^3).
C7Estimate validate_C7(const LipschitzData& lip, const Domain& d);

struct C9C10Estimate {
    double alpha_num = 0.0;
    double m_num = 0.0;
};

/// alpha_num: weighted max of |g(h(0))| + int|K(f1(0))| + int|F(f2(0))|.
/// m_num: max over outer nodes of int_[0,L]^3 l_f1 l_K + int_[0,R]^3 l_f2 l_F.
C9C10Estimate validate_C9_C10(const ProblemInstance& p);

struct CertifySettings {
    std::size_t samples = 1000;
    std::uint64_t seed = 0;
    VarRange v_range{-10.0, 10.0};
};

/// One declared constant next to its numerical estimate.
struct ConstantCheck {
    std::string name;
    double declared = 0.0;
    double estimated = 0.0;
    bool pass = false;
    std::string note;
};

struct CertificateFlags {
    bool C7_valid = false;
    bool C8 = false;
    bool C9_alpha = false;
    bool C10_m = false;
    bool ii = false;
    bool lipschitz = false;  ///< sampled spot checks of l_g, l_h, N, l_f1, l_f2, l_K, l_F
};

struct ContractionCertificate {
    double q = 0.0;
    std::optional<double> c;       ///< 1/(1-q), only when q < 1
    std::optional<double> C_hur;   ///< only when l_g N < 1
    double lgN = 0.0;
    CertificateFlags flags;
    std::vector<ConstantCheck> validation_report;

    bool all_pass() const noexcept {
        return flags.C7_valid && flags.C8 && flags.C9_alpha && flags.C10_m && flags.ii && flags.lipschitz;
    }
};

/// q = l_g l_h + l_1 + l_2.
double contraction_factor(const LipschitzData& lip) noexcept;
/// 1/(1-q) for q < 1.
std::optional<double> picard_constant(double q) noexcept;
/// (1/(1-lgN)) exp(m/(1-lgN)) for 0 <= lgN < 1.
std::optional<double> hur_constant(double lgN, double m) noexcept;

/// Evaluates every hypothesis. Failures land in the flags, never in exceptions.
ContractionCertificate certify(const ProblemInstance& p, const CertifySettings& settings = {});

} // namespace hur
