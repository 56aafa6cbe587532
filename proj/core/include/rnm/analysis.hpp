#pragma once

// Structural checks and weight-interval machinery built on the generator:
// mode pairs, the critical WMEAN weights and their error bounds, the WMIN to
// WMEAN reduction, and bisection for MIXMINMAX weights.
//
// Everything here assumes an equal-m fragment; scenario x^{D,i} puts parent i
// at state 1 and every other parent at state m.

#include <optional>
#include <span>
#include <vector>

#include "rnm/error.hpp"
#include "rnm/model.hpp"

namespace rnm {

struct ModePair {
  int mode = 0;       ///< most probable child state (1-based)
  int runner_up = 0;  ///< second most probable

  bool adjacent() const noexcept { return mode - runner_up == 1 || runner_up - mode == 1; }
  friend bool operator==(const ModePair&, const ModePair&) = default;
};

/// Largest and second-largest probabilities, ties toward the lower state.
/// Throws ArgumentError for fewer than two states.
ModePair mode_pair(const ConditionalDistribution& dist);

/// True when the runner-up is adjacent to the mode. Any state within
/// `tolerance` of the runner-up probability counts as a runner-up, so an
/// adjacent one anywhere in that tie set is enough.
bool check_consecutive_top2(const ConditionalDistribution& dist, double tolerance = 1e-12);

// --- WMEAN --------------------------------------------------------------------

/// (m - k + 1/2) / (m - 1): the weight w_i at which child states k-1 and k are
/// close to equiprobable in scenario x^{D,i}. Requires 2 <= k <= m, otherwise
/// DomainError.
double wmean_equal_pair_weight(int m, int k);

/// (m - k) / (m - 1): the weight w_i at which states k-1 and k+1 are close to
/// equiprobable with k the mode. Requires 2 <= k <= m - 1.
double wmean_flank_pair_weight(int m, int k);

struct WeightInterval {
  double lower = 0.0;
  double upper = 0.0;
  ModePair target_pair;

  bool contains(double w, double slack = 0.0) const noexcept {
    return lower - slack <= w && w <= upper + slack;
  }
};

/// Range of w_i giving the ordered mode pair `target` in scenario x^{D,i}
/// under WMEAN. Raising w_i lowers the expected mean, so the pairs tile [0, 1]
/// from (m, m-1) at w_i = 0 up to (1, 2) at w_i = 1:
///   (k, k-1): [(m-k)/(m-1), (m-k+1/2)/(m-1)]
///   (k, k+1): [(m-k-1/2)/(m-1), (m-k)/(m-1)]
/// clamped to [0, 1]. Throws DomainError for a non-adjacent or out-of-range pair.
WeightInterval wmean_weight_interval(int m, ModePair target);

/// WMEAN weights with w_i fixed and the remainder split equally over the
/// other parents.
std::vector<double> wmean_weights_with(int n, int i, double w_i);

/// The integrand of the bound on the equal-pair error, with c = (k-1)/m:
///   [p_k(c+y) - p_{k-1}(c+y)] * [1/A(c-y) - 1/A(c+y)]
/// where p_j(mu) is the untruncated normal mass of state j at mean mu and
/// A(mu) is the normal mass of [0, 1]. Requires y in [0, 1/(2m)], 2 <= k <= m.
double h_function(double y, int m, int k, double variance);

/// |m * integral_0^{1/(2m)} h(y) dy| by adaptive Gauss-Kronrod quadrature.
double d_ub(int m, int k, double variance);

/// |P(k-1) - P(k)| in scenario x^{D,i} under WMEAN with the given weights.
/// w_i must equal wmean_equal_pair_weight(m, k) and the weights must be a
/// valid WMEAN vector; otherwise ArgumentError.
double d_rnm(int m, int k, std::span<const double> weights, int i, double variance,
             int sample_size);

// --- WMIN ---------------------------------------------------------------------

/// Whether WMIN in scenario x^{D,i} reduces to the single term of parent i for
/// every choice of the other weights: n <= m, or m >= 3 and
/// w_i >= (n-2)/(m-2). Requires n, m >= 2 and w_i >= 1 (ArgumentError);
/// n > m with m = 2 has no finite threshold (DomainError).
bool wmin_reduces(int n, int m, double w_i);

/// The (n - 2) / (m - 2) threshold for n > m >= 3.
double wmin_reduction_threshold(int n, int m);

/// WMEAN weights equivalent to the WMIN term of parent i:
/// beta_i = w_i / (w_i + n - 1), beta_t = 1 / (w_i + n - 1).
/// Throws DomainError unless wmin_reduces(n, m, w_i).
std::vector<double> beta_weights(std::span<const double> wmin_weights, int i, int m);

/// Searches other weights in {1, 10, 100, 1e4, 1e6} for a sample combination of scenario
/// x^{D,i} at which the WMIN value differs from the term of parent i. Returns
/// the full weight vector of the first witness found.
std::optional<std::vector<double>> wmin_reduction_witness(int n, int m, int i, double w_i,
                                                          int sample_size);

// --- MIXMINMAX ----------------------------------------------------------------

/// Signed probability differences in scenario x^{D,1} under MIXMINMAX with
/// weights (1 - w_max, w_max):
///   j = 1: P(k) - P(k+1), needs 1 <= k <= m-1
///   j = 2: P(k-1) - P(k+1), needs 2 <= k <= m-1
/// The parent index of the scenario does not matter for MIXMINMAX.
double d_mix_signed(int j, int n, int m, double w_max, double variance, int sample_size,
                    int k);

/// |d_mix_signed|.
double d_mix(int j, int n, int m, double w_max, double variance, int sample_size, int k);

inline constexpr double kScanStep = 0.01;
inline constexpr double kRootTolerance = 1e-6;

struct BisectionResult {
  double w_max = 0.0;  ///< root of the signed difference
  double bracket_lower = 0.0;
  double bracket_upper = 0.0;
  ScanProfile profile;  ///< the pre-scan, (w_max, signed difference)

  double w_min() const noexcept { return 1.0 - w_max; }
};

/// Root of d_mix_signed in w_max. A 0.01 pre-scan of [0, 1] locates sign
/// changes; where there are several, the bracket in which the two compared
/// states carry the most probability is refined, since a crossing where both
/// probabilities are near zero says nothing about the mode pair. Bisection
/// stops at a bracket width of 1e-6. Throws RootNotFound when the scan shows
/// no sign change.
BisectionResult bisect_wmax(int j, int n, int m, int k, double variance, int sample_size);

/// Range of w_max over which scenario x^{D,1} under MIXMINMAX has the ordered
/// mode pair `target`. The 0.01 scan finds the longest run of matching grid
/// points and its ends are refined by bisection on the mode-pair transition.
/// Throws PairNotAttained when no grid point matches.
WeightInterval mixminmax_weight_interval(int n, int m, ModePair target, double variance,
                                         int sample_size);

/// A target mode pair never occurs on the scan grid. The profile holds
/// (w, 1) where the pair matched and (w, 0) elsewhere.
class PairNotAttained : public DomainError {
 public:
  PairNotAttained(const std::string& what, ScanProfile profile)
      : DomainError(what), profile_(std::move(profile)) {}
  const ScanProfile& profile() const noexcept { return profile_; }

 private:
  ScanProfile profile_;
};

}  // namespace rnm
