#pragma once

namespace fracmarkov {

// Gamma function. Throws PoleError at non-positive integers.
double gamma(double x);

// log Gamma(x) for x > 0.
double log_gamma(double x);

// E_beta(z) = sum_k z^k / Gamma(beta k + 1) for beta in (0, 2], real z.
double mittag_leffler(double beta, double z);

// Probability that the symmetric beta-stable process started at x leaves
// [-1, 1] to the right.
double stable_exit_prob(double beta, double x);

// Density in y of the expected occupation time before leaving [-1, 1] for
// the symmetric beta-stable process started at x.
double stable_occupation_density(double beta, double x, double y);

// Expected exit time from [-1, 1] of the same process.
double stable_mean_exit_time(double beta, double x);

}  // namespace fracmarkov
