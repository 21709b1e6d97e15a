#include "gibbsrec/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gibbsrec {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using Mat = std::vector<double>;  // row-major K x K

Mat mat_mul(const Mat& a, const Mat& b, int K) {
  Mat c(static_cast<std::size_t>(K) * K, 0.0);
  for (int i = 0; i < K; ++i)
    for (int k = 0; k < K; ++k) {
      const double aik = a[static_cast<std::size_t>(i) * K + k];
      if (aik == 0.0) continue;
      for (int j = 0; j < K; ++j)
        c[static_cast<std::size_t>(i) * K + j] +=
            aik * b[static_cast<std::size_t>(k) * K + j];
    }
  return c;
}

double inf_norm(const Mat& m, int K) {
  double best = 0.0;
  for (int i = 0; i < K; ++i) {
    double row = 0.0;
    for (int j = 0; j < K; ++j)
      row += std::fabs(m[static_cast<std::size_t>(i) * K + j]);
    best = std::max(best, row);
  }
  return best;
}

struct EigenPair {
  double lambda;
  std::vector<double> vec;  // positive, L1-normalized
};

// Power iteration on a nonnegative primitive matrix (transpose = true gives
// the left eigenvector).
EigenPair power_iterate(const Mat& L, int K, bool transpose) {
  std::vector<double> v(K, 1.0 / K), next(K);
  double lambda = 0.0;
  const int cap = 1000000;
  for (int it = 0; it < cap; ++it) {
    double sum = 0.0;
    for (int i = 0; i < K; ++i) {
      double acc = 0.0;
      for (int j = 0; j < K; ++j) {
        const double entry = transpose
                                 ? L[static_cast<std::size_t>(j) * K + i]
                                 : L[static_cast<std::size_t>(i) * K + j];
        acc += entry * v[j];
      }
      next[i] = acc;
      sum += acc;
    }
    lambda = sum;  // v has unit L1 mass, so the total mass is the eigenvalue
    double delta = 0.0;
    for (int i = 0; i < K; ++i) {
      next[i] /= sum;
      delta = std::max(delta, std::fabs(next[i] - v[i]));
    }
    v.swap(next);
    if (delta < 1e-14) return {lambda, v};
  }
  double residual = 0.0;
  for (int i = 0; i < K; ++i) {
    double acc = 0.0;
    for (int j = 0; j < K; ++j) {
      const double entry = transpose ? L[static_cast<std::size_t>(j) * K + i]
                                     : L[static_cast<std::size_t>(i) * K + j];
      acc += entry * v[j];
    }
    residual = std::max(residual, std::fabs(acc - lambda * v[i]));
  }
  throw NumericError("power iteration did not converge", residual);
}

void check_model_word(const GibbsModel& m, const Word& w,
                      const char* what) {
  if (!is_admissible(w.symbols(), m.sft))
    throw DomainError(std::string(what) +
                      ": word is inadmissible for this model (measure zero)");
}

}  // namespace

Potential::Potential(
    const SftSpec& sft, int depth,
    const std::vector<std::pair<std::vector<std::int32_t>, double>>& entries) {
  if (depth < 1) throw DomainError("potential depth must be >= 1");
  depth_ = depth;
  K_ = sft.K();
  double slots = std::pow(static_cast<double>(K_), depth);
  if (slots > static_cast<double>(std::size_t{1} << 22))
    throw ResourceLimitError("potential table K^depth exceeds cap");
  table_.assign(static_cast<std::size_t>(slots), kNaN);
  for (const auto& [word, value] : entries) {
    if (word.size() != static_cast<std::size_t>(depth))
      throw DomainError("potential entry length does not match depth");
    if (!is_admissible(word, sft))
      throw DomainError("potential entry for an inadmissible word");
    if (!std::isfinite(value))
      throw DomainError("potential values must be finite");
    double& slot = table_[index_of(word.data())];
    if (!std::isnan(slot)) throw DomainError("duplicate potential entry");
    slot = value;
  }
  // Coverage: exactly the admissible depth-words must be present.
  std::vector<std::int32_t> word(depth, 1);
  for (std::size_t idx = 0; idx < table_.size(); ++idx) {
    std::size_t rem = idx;
    for (int t = depth - 1; t >= 0; --t) {
      word[t] = static_cast<std::int32_t>(rem % K_) + 1;
      rem /= K_;
    }
    const bool adm = is_admissible(word, sft);
    if (adm && std::isnan(table_[idx]))
      throw DomainError("potential table is missing an admissible word");
  }
}

Potential Potential::constant(const SftSpec& sft, int depth, double value) {
  std::vector<std::pair<std::vector<std::int32_t>, double>> entries;
  for (const auto& w : enumerate_words(sft, depth))
    entries.emplace_back(w.symbols(), value);
  return Potential(sft, depth, entries);
}

std::size_t Potential::index_of(const std::int32_t* word) const {
  std::size_t idx = 0;
  for (int t = 0; t < depth_; ++t)
    idx = idx * K_ + static_cast<std::size_t>(word[t] - 1);
  return idx;
}

double Potential::value(const std::int32_t* word) const {
  const double v = table_[index_of(word)];
  if (std::isnan(v))
    throw DomainError("potential evaluated on an inadmissible word");
  return v;
}

double Potential::pair_value(int i, int j) const {
  if (depth_ == 1) return table_[static_cast<std::size_t>(i - 1)];
  if (depth_ == 2)
    return table_[static_cast<std::size_t>(i - 1) * K_ + (j - 1)];
  throw DomainError("pair view requires depth <= 2 (recode first)");
}

BernoulliSpec::BernoulliSpec(std::vector<double> probs) : p(std::move(probs)) {
  if (p.size() < 2) throw DomainError("Bernoulli spec needs at least 2 symbols");
  double sum = 0.0;
  for (double x : p) {
    if (!(x > 0.0)) throw DomainError("Bernoulli probabilities must be positive");
    sum += x;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw DomainError("Bernoulli probabilities must sum to 1");
  for (double& x : p) x /= sum;  // remove residual rounding from config input
}

Potential bernoulli_potential(const BernoulliSpec& spec) {
  const int K = static_cast<int>(spec.p.size());
  auto sft = SftSpec::full_shift(K);
  std::vector<std::pair<std::vector<std::int32_t>, double>> entries;
  for (int i = 1; i <= K; ++i)
    entries.emplace_back(std::vector<std::int32_t>{i}, std::log(spec.p[i - 1]));
  return Potential(sft, 1, entries);
}

Word Recoding::encode(const Word& w) const {
  if (passthrough) return w;
  if (w.size() < static_cast<std::size_t>(block_length))
    throw DomainError("word shorter than the recoding block length");
  std::vector<std::int32_t> out;
  out.reserve(w.size() - block_length + 1);
  std::vector<std::int32_t> block(block_length);
  for (std::size_t t = 0; t + block_length <= w.size(); ++t) {
    for (int l = 0; l < block_length; ++l) block[l] = w.symbols()[t + l];
    auto it = std::lower_bound(blocks.begin(), blocks.end(), block);
    if (it == blocks.end() || *it != block)
      throw DomainError("block not found in recoded alphabet");
    out.push_back(static_cast<std::int32_t>(it - blocks.begin()) + 1);
  }
  return Word(std::move(out), recoded);
}

Recoding recode_depth(const SftSpec& sft, const Potential& pot,
                      std::size_t alphabet_cap) {
  const int r = pot.depth();
  if (r <= 2) {
    std::vector<std::vector<std::int32_t>> blocks;
    for (int i = 1; i <= sft.K(); ++i) blocks.push_back({i});
    return Recoding{sft, sft, pot, 1, true, std::move(blocks)};
  }
  auto block_words = enumerate_words(sft, r - 1, alphabet_cap);
  const int B = static_cast<int>(block_words.size());
  std::vector<std::vector<std::int32_t>> blocks;
  blocks.reserve(B);
  for (const auto& w : block_words) blocks.push_back(w.symbols());

  // Overlap adjacency: u -> v iff u shifted left one step agrees with v.
  std::vector<std::vector<int>> rows(B, std::vector<int>(B, 0));
  for (int u = 0; u < B; ++u)
    for (int v = 0; v < B; ++v) {
      bool overlap = true;
      for (int l = 0; l + 1 < r - 1 && overlap; ++l)
        overlap = blocks[u][l + 1] == blocks[v][l];
      if (overlap && sft.allowed(blocks[u][r - 2], blocks[v][r - 2]))
        rows[u][v] = 1;
    }
  SftSpec recoded(B, rows);

  std::vector<std::pair<std::vector<std::int32_t>, double>> entries;
  std::vector<std::int32_t> full(r);
  for (int u = 0; u < B; ++u)
    for (int v = 0; v < B; ++v) {
      if (!rows[u][v]) continue;
      for (int l = 0; l < r - 1; ++l) full[l] = blocks[u][l];
      full[r - 1] = blocks[v][r - 2];
      entries.emplace_back(
          std::vector<std::int32_t>{static_cast<std::int32_t>(u + 1),
                                    static_cast<std::int32_t>(v + 1)},
          pot.value(full.data()));
    }
  Potential recoded_pot(recoded, 2, entries);
  return Recoding{sft, std::move(recoded), std::move(recoded_pot), r - 1,
                  false, std::move(blocks)};
}

GibbsModel build_gibbs(const SftSpec& sft, const Potential& pot) {
  if (pot.depth() > 2)
    throw DomainError("potentials of depth >= 3 must be recoded to depth 2");
  if (pot.K() != sft.K())
    throw DomainError("potential alphabet does not match the shift");
  const int M = sft.require_mixing();
  const int K = sft.K();

  Mat L(static_cast<std::size_t>(K) * K, 0.0);
  for (int i = 1; i <= K; ++i)
    for (int j = 1; j <= K; ++j)
      if (sft.allowed(i, j))
        L[static_cast<std::size_t>(i - 1) * K + (j - 1)] =
            std::exp(pot.pair_value(i, j));

  auto right = power_iterate(L, K, false);
  auto left = power_iterate(L, K, true);

  GibbsModel m(sft, pot);
  m.mixing_exponent = M;
  m.lambda = right.lambda;
  m.P = std::log(m.lambda);
  m.h_vec = right.vec;
  m.l_vec = left.vec;

  m.transition.assign(static_cast<std::size_t>(K) * K, 0.0);
  for (int i = 0; i < K; ++i) {
    double row = 0.0;
    for (int j = 0; j < K; ++j) {
      const double v = L[static_cast<std::size_t>(i) * K + j] * m.h_vec[j] /
                       (m.lambda * m.h_vec[i]);
      m.transition[static_cast<std::size_t>(i) * K + j] = v;
      row += v;
    }
    for (int j = 0; j < K; ++j)
      m.transition[static_cast<std::size_t>(i) * K + j] /= row;
  }

  // Stationary vector: l.h seed, then polish against the renormalized rows.
  m.pi.assign(K, 0.0);
  double mass = 0.0;
  for (int i = 0; i < K; ++i) {
    m.pi[i] = m.l_vec[i] * m.h_vec[i];
    mass += m.pi[i];
  }
  for (int i = 0; i < K; ++i) m.pi[i] /= mass;
  for (int it = 0; it < 2000; ++it) {
    std::vector<double> next(K, 0.0);
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j)
        next[j] += m.pi[i] * m.transition[static_cast<std::size_t>(i) * K + j];
    double total = 0.0, delta = 0.0;
    for (int j = 0; j < K; ++j) total += next[j];
    for (int j = 0; j < K; ++j) {
      next[j] /= total;
      delta = std::max(delta, std::fabs(next[j] - m.pi[j]));
    }
    m.pi.swap(next);
    if (delta < 1e-16) break;
  }

  // Entropy via pressure minus the mean of the potential.
  double mean_f = 0.0;
  for (int i = 1; i <= K; ++i)
    for (int j = 1; j <= K; ++j)
      if (sft.allowed(i, j))
        mean_f += m.stationary(i) * m.p(i, j) * pot.pair_value(i, j);
  m.h_mu = m.P - mean_f;

  // Centered pair observable and the Green-Kubo series.
  Mat Pp(static_cast<std::size_t>(K) * K, 0.0);  // transition minus 1.pi
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      Pp[static_cast<std::size_t>(i) * K + j] =
          m.transition[static_cast<std::size_t>(i) * K + j] - m.pi[j];

  std::vector<double> b(K, 0.0), w(K, 0.0);
  double var0 = 0.0;
  for (int i = 1; i <= K; ++i)
    for (int j = 1; j <= K; ++j) {
      if (!sft.allowed(i, j)) continue;
      const double fb = pot.pair_value(i, j) - mean_f;
      const double weight = m.stationary(i) * m.p(i, j);
      var0 += weight * fb * fb;
      b[j - 1] += weight * fb;
      w[i - 1] += m.p(i, j) * fb;
    }
  double b_l1 = 0.0, w_inf = 0.0;
  for (int i = 0; i < K; ++i) {
    b_l1 += std::fabs(b[i]);
    w_inf = std::max(w_inf, std::fabs(w[i]));
  }

  // Contraction certificate: first power with inf-norm <= 1/2.
  m.slow_mixing = false;
  int m_star = 0;
  double q = 1.0, b_max = 1.0;  // b_max covers ||Pp^a|| for a < m_star (incl. I)
  {
    Mat powm = Pp;
    for (int e = 1; e <= 512; ++e) {
      const double nrm = inf_norm(powm, K);
      if (nrm <= 0.5) {
        m_star = e;
        q = nrm;
        break;
      }
      b_max = std::max(b_max, nrm);
      powm = mat_mul(powm, Pp, K);
    }
  }
  double sum_norms_bound;  // upper bound on sum_{s>=0} ||Pp^s||
  if (m_star == 0) {
    m.slow_mixing = true;
    sum_norms_bound = std::numeric_limits<double>::infinity();
  } else {
    sum_norms_bound = m_star * b_max / (1.0 - q);
  }

  double cov_sum = 0.0;
  m.rho_tail_bound = std::numeric_limits<double>::infinity();
  {
    std::vector<double> u = w;  // Pp^{k-1} w entering iteration k
    Mat powm(static_cast<std::size_t>(K) * K, 0.0);
    for (int i = 0; i < K; ++i) powm[static_cast<std::size_t>(i) * K + i] = 1.0;
    const int cap = 100000;
    bool certified = false;
    for (int k = 1; k <= cap; ++k) {
      const double tail = 2.0 * b_l1 * w_inf * inf_norm(powm, K) *
                          sum_norms_bound;
      if (tail < 1e-12) {
        m.rho_tail_bound = tail;
        certified = true;
        break;
      }
      double term = 0.0;
      for (int i = 0; i < K; ++i) term += b[i] * u[i];
      cov_sum += term;
      std::vector<double> nu(K, 0.0);
      for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j)
          nu[i] += Pp[static_cast<std::size_t>(i) * K + j] * u[j];
      u.swap(nu);
      powm = mat_mul(powm, Pp, K);
    }
    if (!certified) {
      m.slow_mixing = true;
      m.rho_tail_bound = 2.0 * b_l1 * w_inf * inf_norm(powm, K) *
                         sum_norms_bound;
    }
  }
  m.rho_mu = var0 + 2.0 * cov_sum;
  if (m.rho_mu < 0.0) m.rho_mu = 0.0;  // rounding on degenerate models

  // Gibbs constant from the exact Markov cylinder formula: the ratio
  // mu([w]) / exp(-nP + S_n f) depends only on the first symbol, the last
  // symbol, and the continuation closing the last potential term.
  double c_raw = 1.0;
  for (int i = 1; i <= K; ++i)
    for (int j = 1; j <= K; ++j)
      for (int c = 1; c <= K; ++c) {
        if (!sft.allowed(j, c)) continue;
        const double ratio = m.lambda * m.stationary(i) *
                             (m.h_vec[j - 1] / m.h_vec[i - 1]) *
                             std::exp(-pot.pair_value(j, c));
        c_raw = std::max(c_raw, std::max(ratio, 1.0 / ratio));
      }
  m.C = std::max(c_raw, 1.0 + 1e-12);

  // Certified bound on the modulus of the second transition eigenvalue via
  // norms of repeated squares, log-scaled to dodge underflow.
  {
    Mat Bm = Pp;
    double log_scale = 0.0;
    double bound = 1.0;
    bool zero = false;
    for (int s = 0; s <= 40; ++s) {
      const double nrm = inf_norm(Bm, K);
      if (nrm < 1e-300) {
        zero = true;
        break;
      }
      bound = std::exp((log_scale + std::log(nrm)) /
                       static_cast<double>(std::uint64_t{1} << s));
      Mat unit = Bm;
      for (double& x : unit) x /= nrm;
      log_scale = 2.0 * (log_scale + std::log(nrm));
      Bm = mat_mul(unit, unit, K);
    }
    m.gamma_raw = zero ? 0.0 : bound;
  }
  m.gamma = std::min(0.999, std::max(1e-3, 1.05 * m.gamma_raw));
  if (!(m.gamma < 1.0))
    throw NumericError("decay rate did not stay below 1", m.gamma);

  // Smallest D for the correlation bound over the endpoint grid; the bridge
  // entry (Pp^{g+1})_{ab} / pi_b is exactly the relative correlation excess.
  {
    double d_raw = 0.0;
    Mat powm = Pp;  // Pp^{g+1} for g = 0
    double gpow = 1.0;
    for (int g = 0; g <= 40; ++g) {
      for (int a = 0; a < K; ++a)
        for (int bq = 0; bq < K; ++bq) {
          const double excess =
              std::fabs(powm[static_cast<std::size_t>(a) * K + bq]) /
              m.pi[bq];
          d_raw = std::max(d_raw, excess / gpow);
        }
      powm = mat_mul(powm, Pp, K);
      gpow *= m.gamma;
    }
    m.D_raw = d_raw;
    m.D = d_raw < 1e-12 ? 1.0 : 2.0 * d_raw;
  }

  return m;
}

GibbsModel build_gibbs(const BernoulliSpec& spec) {
  const int K = static_cast<int>(spec.p.size());
  return build_gibbs(SftSpec::full_shift(K), bernoulli_potential(spec));
}

double log_cylinder_measure(const GibbsModel& m, const Word& w) {
  check_model_word(m, w, "cylinder_measure");
  if (w.empty()) return 0.0;
  const auto& s = w.symbols();
  double acc = std::log(m.stationary(s[0]));
  for (std::size_t t = 0; t + 1 < s.size(); ++t)
    acc += std::log(m.p(s[t], s[t + 1]));
  return acc;
}

double cylinder_measure(const GibbsModel& m, const Word& w) {
  return std::exp(log_cylinder_measure(m, w));
}

double original_cylinder_measure(const GibbsModel& m, const Recoding& rec,
                                 const std::vector<std::int32_t>& word) {
  if (!is_admissible(word, rec.original))
    throw DomainError("cylinder has measure zero: word inadmissible");
  if (rec.passthrough) return cylinder_measure(m, Word(word, rec.original));
  if (word.size() >= static_cast<std::size_t>(rec.block_length))
    return cylinder_measure(m, rec.encode(Word(word, rec.original)));
  // Short word: sum over all admissible extensions to one full block.
  double total = 0.0;
  std::vector<std::int32_t> ext(word);
  ext.resize(rec.block_length);
  const auto extend = [&](auto&& self, std::size_t pos) -> void {
    if (pos == static_cast<std::size_t>(rec.block_length)) {
      total += cylinder_measure(m, rec.encode(Word(ext, rec.original)));
      return;
    }
    for (int c = 1; c <= rec.original.K(); ++c) {
      if (pos > 0 && !rec.original.allowed(ext[pos - 1], c)) continue;
      ext[pos] = c;
      self(self, pos + 1);
    }
  };
  extend(extend, word.size());
  return total;
}

double birkhoff_sum(const GibbsModel& m, const Word& w, int continuation) {
  check_model_word(m, w, "birkhoff_sum");
  if (w.empty()) return 0.0;
  const auto& s = w.symbols();
  if (continuation < 1 || continuation > m.K() ||
      !m.sft.allowed(s.back(), continuation))
    throw DomainError("continuation symbol not admissible after the word");
  double acc = 0.0;
  for (std::size_t t = 0; t + 1 < s.size(); ++t)
    acc += m.potential.pair_value(s[t], s[t + 1]);
  acc += m.potential.pair_value(s.back(), continuation);
  return acc;
}

double correlation(const GibbsModel& m, const Word& u, const Word& v,
                   std::int64_t n) {
  if (n < static_cast<std::int64_t>(u.size()))
    throw DomainError("correlation needs n >= |u|");
  if (!is_admissible(u.symbols(), m.sft) || !is_admissible(v.symbols(), m.sft))
    return 0.0;
  if (u.empty() && v.empty()) return 1.0;
  if (u.empty()) return cylinder_measure(m, v);
  if (v.empty()) return cylinder_measure(m, u);
  const int K = m.K();
  const std::int64_t steps = n + 1 - static_cast<std::int64_t>(u.size());
  std::vector<double> row(K, 0.0);
  row[u.symbols().back() - 1] = 1.0;
  for (std::int64_t e = 0; e < steps; ++e) {
    std::vector<double> next(K, 0.0);
    for (int i = 0; i < K; ++i) {
      if (row[i] == 0.0) continue;
      for (int j = 0; j < K; ++j)
        next[j] += row[i] * m.transition[static_cast<std::size_t>(i) * K + j];
    }
    row.swap(next);
  }
  double acc = cylinder_measure(m, u) * row[v.symbols().front() - 1];
  const auto& s = v.symbols();
  for (std::size_t t = 0; t + 1 < s.size(); ++t) acc *= m.p(s[t], s[t + 1]);
  return acc;
}

}  // namespace gibbsrec
