#include "vkge/scoring.hpp"

#include <string>

#include "vkge/error.hpp"

namespace vkge {
namespace {

void check_lengths(std::span<const double> s, std::span<const double> r, std::span<const double> o, bool complex) {
  if (s.size() != r.size() || s.size() != o.size()) {
    throw DimensionError("embedding lengths differ: " + std::to_string(s.size()) + ", " + std::to_string(r.size()) +
                         ", " + std::to_string(o.size()));
  }
  if (complex && s.size() % 2 != 0) {
    throw DimensionError("ComplEx embeddings need an even length, got " + std::to_string(s.size()));
  }
}

}  // namespace

double score_distmult(std::span<const double> s, std::span<const double> r, std::span<const double> o) {
  check_lengths(s, r, o, false);
  double acc = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) acc += r[i] * (s[i] * o[i]);
  return acc;
}

double score_complex(std::span<const double> s, std::span<const double> r, std::span<const double> o) {
  check_lengths(s, r, o, true);
  const std::size_t k = s.size() / 2;
  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double sr = s[i], si = s[k + i];
    const double rr = r[i], ri = r[k + i];
    const double orr = o[i], oi = o[k + i];
    acc += rr * (sr * orr + si * oi) + ri * (sr * oi - si * orr);
  }
  return acc;
}

double score(Scorer scorer, std::span<const double> s, std::span<const double> r, std::span<const double> o) {
  return scorer == Scorer::kComplEx ? score_complex(s, r, o) : score_distmult(s, r, o);
}

void accumulate_score_gradients(Scorer scorer, std::span<const double> s, std::span<const double> r,
                                std::span<const double> o, double coeff, std::span<double> ds,
                                std::span<double> dr, std::span<double> d_o) {
  const bool complex = scorer == Scorer::kComplEx;
  check_lengths(s, r, o, complex);
  if (ds.size() != s.size() || dr.size() != s.size() || d_o.size() != s.size()) {
    throw DimensionError("gradient buffers do not match embedding length");
  }
  if (!complex) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double gs = r[i] * o[i], gr = s[i] * o[i], go = r[i] * s[i];
      ds[i] += coeff * gs;
      dr[i] += coeff * gr;
      d_o[i] += coeff * go;
    }
    return;
  }
  const std::size_t k = s.size() / 2;
  for (std::size_t i = 0; i < k; ++i) {
    const double sr = s[i], si = s[k + i];
    const double rr = r[i], ri = r[k + i];
    const double orr = o[i], oi = o[k + i];
    // φ_i = rr·sr·orr + rr·si·oi + ri·sr·oi − ri·si·orr
    const double g_sr = rr * orr + ri * oi;
    const double g_si = rr * oi - ri * orr;
    const double g_rr = sr * orr + si * oi;
    const double g_ri = sr * oi - si * orr;
    const double g_or = rr * sr - ri * si;
    const double g_oi = rr * si + ri * sr;
    ds[i] += coeff * g_sr;
    ds[k + i] += coeff * g_si;
    dr[i] += coeff * g_rr;
    dr[k + i] += coeff * g_ri;
    d_o[i] += coeff * g_or;
    d_o[k + i] += coeff * g_oi;
  }
}

ScoreGradients grad_score(Scorer scorer, std::span<const double> s, std::span<const double> r,
                          std::span<const double> o) {
  ScoreGradients g{std::vector<double>(s.size()), std::vector<double>(r.size()), std::vector<double>(o.size())};
  accumulate_score_gradients(scorer, s, r, o, 1.0, g.d_subject, g.d_relation, g.d_object);
  return g;
}

}  // namespace vkge
