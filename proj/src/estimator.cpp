#include "tracerec/estimator.hpp"

#include <stdexcept>
#include <string>

#include "tracerec/parallel.hpp"
#include "tracerec/strings.hpp"

namespace tracerec {

namespace {

// Shared sweep. acc[i] holds B_i at the current position (the weighted
// count of partial matches of w[0..i) ending strictly before it, already
// advanced by the gap weight); prev[i] is the match column A_i of the
// previous position.
cplx weighted_sweep(BitsView s, BitsView w, std::span<const cplx> weights) {
  const std::size_t l = w.size();
  if (s.size() < l) return {0.0, 0.0};
  std::vector<cplx> gap(l, cplx{0.0, 0.0});
  std::vector<cplx> match(l, cplx{0.0, 0.0});
  CompensatedComplexSum total;
  cplx lead{1.0, 0.0};  // weights[0]^j
  for (std::size_t j = 0; j < s.size(); ++j) {
    const int c = s[j];
    for (std::size_t i = l - 1; i >= 1; --i) {
      gap[i] = weights[i] * gap[i] + match[i - 1];
      match[i] = (c == w[i]) ? gap[i] : cplx{0.0, 0.0};
    }
    match[0] = (c == w[0]) ? lead : cplx{0.0, 0.0};
    total.add(match[l - 1]);
    lead *= weights[0];
  }
  return total.value();
}

void check_length(BitsView w, const EvalVector& zv) {
  if (w.size() != zv.l() || w.empty()) {
    throw std::invalid_argument("word length " + std::to_string(w.size()) +
                                " does not match evaluation vector length " + std::to_string(zv.l()));
  }
}

}  // namespace

cplx subsequence_statistic(BitsView trace, BitsView w, const EvalVector& zv, const ChannelParams& ch) {
  check_length(w, zv);
  ch.require_interior("subsequence_statistic");
  const double p = ch.p();
  const double q = ch.q();
  std::vector<cplx> zeta(zv.l());
  for (std::size_t i = 0; i < zv.l(); ++i) zeta[i] = (zv.at(i) - q) / p;
  return weighted_sweep(trace, w, zeta) * std::pow(p, -static_cast<double>(zv.l()));
}

cplx weighted_subsequence_sum(BitsView x, BitsView w, const EvalVector& zv) {
  check_length(w, zv);
  std::vector<cplx> z(zv.l());
  for (std::size_t i = 0; i < zv.l(); ++i) z[i] = zv.at(i);
  return weighted_sweep(x, w, z);
}

cplx substring_statistic(BitsView x, BitsView w, cplx z) {
  CompensatedComplexSum total;
  std::size_t last = 0;
  cplx power{1.0, 0.0};
  for (const auto k : occurrence_positions(x, w)) {
    for (; last < k; ++last) power *= z;
    total.add(power);
  }
  return total.value();
}

namespace {

struct Moments {
  CompensatedComplexSum sum;
  CompensatedSum sq_re;
  CompensatedSum sq_im;
  std::uint64_t count = 0;

  void add(cplx v, std::uint64_t weight) {
    const double wgt = static_cast<double>(weight);
    sum.add(wgt * v);
    sq_re.add(wgt * v.real() * v.real());
    sq_im.add(wgt * v.imag() * v.imag());
    count += weight;
  }
  void merge(const Moments& o) {
    sum.merge(o.sum);
    sq_re.merge(o.sq_re);
    sq_im.merge(o.sq_im);
    count += o.count;
  }
  [[nodiscard]] MeanResult result() const {
    MeanResult r;
    r.count = count;
    const double nn = static_cast<double>(count);
    r.mean = sum.value() / nn;
    if (count > 1) {
      const double var_re = std::max(0.0, (sq_re.value() - nn * r.mean.real() * r.mean.real()) / (nn - 1.0));
      const double var_im = std::max(0.0, (sq_im.value() - nn * r.mean.imag() * r.mean.imag()) / (nn - 1.0));
      r.stderr_ = std::sqrt((var_re + var_im) / nn);
    }
    return r;
  }
};

template <class Item, class Eval>
MeanResult reduce(std::span<const Item> items, unsigned jobs, Eval eval) {
  const auto parts = parallel_blocks<Moments>(items.size(), jobs, [&](std::uint64_t lo, std::uint64_t hi) {
    Moments m;
    for (std::uint64_t k = lo; k < hi; ++k) eval(items[k], m);
    return m;
  });
  Moments all;
  for (const auto& m : parts) all.merge(m);
  return all.result();
}

}  // namespace

MeanResult mean_statistic(std::span<const Trace> traces, BitsView w, const EvalVector& zv,
                          const ChannelParams& ch, unsigned jobs) {
  if (traces.empty()) throw std::invalid_argument("mean_statistic needs at least one trace");
  return reduce<Trace>(traces, jobs, [&](const Trace& t, Moments& m) {
    m.add(subsequence_statistic(t, w, zv, ch), 1);
  });
}

MeanResult mean_statistic(const TracePool& pool, BitsView w, const EvalVector& zv, const ChannelParams& ch,
                          unsigned jobs) {
  if (pool.empty()) throw std::invalid_argument("mean_statistic needs at least one trace");
  std::vector<std::pair<const Trace*, std::uint64_t>> items;
  items.reserve(pool.distinct());
  for (const auto& [t, c] : pool.entries()) items.emplace_back(&t, c);
  return reduce<std::pair<const Trace*, std::uint64_t>>(items, jobs, [&](const auto& item, Moments& m) {
    m.add(subsequence_statistic(*item.first, w, zv, ch), item.second);
  });
}

}  // namespace tracerec
