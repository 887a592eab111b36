#pragma once

// Brute-force reference computations. They work on plain index lists and
// share no code with the library's search routines.

#include <cstddef>
#include <vector>

#include "covent/families.hpp"

namespace covent::verify {

using Sets = std::vector<std::vector<int>>;
using Labels = std::vector<int>;

Sets to_sets(const SetFamily& F);
/// Cell index per carrier index; F must be disjoint.
Labels to_labels(const SetFamily& F);

double ref_phi(double x);

/// Smallest number of sets whose union contains `target`, by trying every
/// subset in order of size. At most 24 sets.
std::size_t brute_min_cover(const Sets& sets, const std::vector<int>& target);

/// max over nonempty atoms of brute_min_cover restricted to the atom.
std::size_t brute_count_cond(const Sets& U, const Labels& beta);

/// H(alpha | beta) = H(alpha v beta) - H(beta) from dense joint tables.
double brute_partition_cond(const std::vector<double>& w, const Labels& alpha, const Labels& beta);

/// min over every assignment of points to a covering element of
/// H(alpha | beta); with beta constant this is H(U).
double brute_cover_cond(const std::vector<double>& w, const Sets& U, const Labels& beta);

/// min over every ordering of U of the ordered-difference entropy.
double brute_ext_min(const std::vector<double>& w, const Sets& U);

/// log of the spectral radius of a nonnegative integer matrix.
double log_spectral_radius(const std::vector<std::vector<int>>& A);

/// -sum_i pi_i sum_j P_ij log P_ij
double markov_entropy_rate(const std::vector<std::vector<double>>& P, const std::vector<double>& pi);

/// Number of words of length n avoiding "11" over {0,1}: F(n+2).
double golden_word_count(int n);

}  // namespace covent::verify
