#pragma once

// Reference computations used as test oracles. Nothing here calls into the
// library, so agreement is evidence rather than tautology.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// |b^H a(theta)|^2 with explicit half-wavelength ULA steering vectors,
// b = a(theta_bar) / sqrt(M). With small_angle, sin(x) is replaced by x.
double steering_gain(int antennas, double theta_bar, double theta, bool small_angle);

double poisson_pmf(int n, double mean);

// Densities of the distance order statistics obtained by mixing binomial
// order statistics of n i.i.d. area-uniform points over the Poisson law of n.
struct AnnulusField {
  double inner;
  double outer;
  double half_angle;
  double density;
  double mean() const;
  double cdf(double r) const;  // of one unordered distance
  double pdf(double r) const;
};

// d_k given j <= K < i
double marginal_only_strong(const AnnulusField& f, int j, int i, int k, double r);
// (d_j, d_i) given K >= i
double joint_both(const AnnulusField& f, int j, int i, double rj, double ri);

// Uniform midpoint sums.
double midpoint_1d(const std::function<double(double)>& g, double a, double b, int n);
double midpoint_2d(const std::function<double(double, double)>& g, double ax, double bx, double ay, double by,
                   int n);

// Simple conditioned field sampler: distances only, sorted ascending.
std::vector<double> sorted_distances(const AnnulusField& f, std::mt19937_64& rng);

}  // namespace oracle
