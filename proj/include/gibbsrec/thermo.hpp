#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gibbsrec/sft.hpp"

namespace gibbsrec {

// Locally constant potential: one real value per admissible word of length
// `depth`, natural-log scale.  The table must cover exactly the admissible
// words: missing or extra entries are config errors.
class Potential {
 public:
  Potential(const SftSpec& sft, int depth,
            const std::vector<std::pair<std::vector<std::int32_t>, double>>&
                entries);

  static Potential constant(const SftSpec& sft, int depth, double value);

  int depth() const { return depth_; }
  int K() const { return K_; }

  // word points at `depth` symbols forming an admissible word.
  double value(const std::int32_t* word) const;

  // Depth <= 2 view used by the transfer matrix: depth-1 tables ignore j.
  double pair_value(int i, int j) const;

 private:
  int depth_;
  int K_;
  std::vector<double> table_;  // K^depth slots, NaN where inadmissible
  std::size_t index_of(const std::int32_t* word) const;
};

struct BernoulliSpec {
  std::vector<double> p;
  explicit BernoulliSpec(std::vector<double> probs);
};

// Depth-1 potential log p_i on the full K-shift.
Potential bernoulli_potential(const BernoulliSpec& spec);

// Result of collapsing a depth-r potential (r >= 3) to depth 2 over the
// alphabet of admissible (r-1)-blocks.  Birkhoff sums are preserved; cylinder
// measures of original words are recovered through encode / the extension sum.
struct Recoding {
  SftSpec original;
  SftSpec recoded;
  Potential potential;
  int block_length;  // r-1, or 1 for the passthrough case
  bool passthrough;
  std::vector<std::vector<std::int32_t>> blocks;  // block symbol b -> blocks[b-1]

  // Block word of length |w| - block_length + 1; requires |w| >= block_length.
  Word encode(const Word& w) const;
};

Recoding recode_depth(const SftSpec& sft, const Potential& pot,
                      std::size_t alphabet_cap = 4096);

// Gibbs measure of a depth <= 2 potential as an explicit Markov measure,
// with every derived constant computed at build time.
struct GibbsModel {
  SftSpec sft;
  Potential potential;
  int mixing_exponent;

  double lambda;  // leading transfer eigenvalue
  double P;       // pressure = log lambda
  std::vector<double> h_vec;  // right eigenvector, positive
  std::vector<double> l_vec;  // left eigenvector, positive
  std::vector<double> pi;     // stationary distribution
  std::vector<double> transition;  // row-major KxK, rows sum to 1

  double h_mu;
  double rho_mu;
  double rho_tail_bound;  // certified bound on the truncated covariance tail
  bool slow_mixing;

  double C;  // Gibbs constant

  double D, gamma;          // reported decay constants (with safety margins)
  double D_raw, gamma_raw;  // before margins

  int K() const { return sft.K(); }
  double p(int i, int j) const {  // 1-based
    return transition[static_cast<std::size_t>(i - 1) * K() + (j - 1)];
  }
  double stationary(int i) const { return pi[i - 1]; }
  bool cohomologous_to_constant() const { return rho_mu < 1e-10; }

  GibbsModel(SftSpec s, Potential pot)
      : sft(std::move(s)), potential(std::move(pot)) {}
};

// Perron eigendata via power iteration; refuses non-mixing shifts and
// potentials of depth >= 3 (recode first).
GibbsModel build_gibbs(const SftSpec& sft, const Potential& pot);
GibbsModel build_gibbs(const BernoulliSpec& spec);

double log_cylinder_measure(const GibbsModel& m, const Word& w);
double cylinder_measure(const GibbsModel& m, const Word& w);

// Measure of an original-alphabet cylinder through a recoding.
double original_cylinder_measure(const GibbsModel& m, const Recoding& rec,
                                 const std::vector<std::int32_t>& word);

// Sum of the potential along the word, the last term closed by `continuation`
// (a symbol admissible after the word's last symbol).  Equals S_n f on the
// cylinder for any point whose (n+1)-st symbol is the continuation.
double birkhoff_sum(const GibbsModel& m, const Word& w, int continuation);

// Exact mu([u] cap sigma^{-n}[v]) via the Markov bridge; n >= |u|.
// Inadmissible words (for this model's shift) have measure zero.
double correlation(const GibbsModel& m, const Word& u, const Word& v,
                   std::int64_t n);

}  // namespace gibbsrec
