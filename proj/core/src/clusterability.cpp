#include "domp/clusterability.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "domp/error.hpp"

namespace domp {

namespace {

// Dip of a sorted sample in count units (multiply by 1/(2n) for the
// statistic). Arrays are 1-based; index 0 is unused.
double dip_counts(const std::vector<double>& x, std::size_t n, std::size_t& low, std::size_t& high) {
  low = 1;
  high = n;
  if (x[n] == x[1]) return 1.0;

  // mn: predecessor on the greatest convex minorant; mj: successor on the
  // least concave majorant.
  std::vector<std::size_t> mn(n + 1), mj(n + 1), gcm(n + 2), lcm(n + 2);
  mn[1] = 1;
  for (std::size_t j = 2; j <= n; ++j) {
    mn[j] = j - 1;
    for (;;) {
      const std::size_t a = mn[j];
      const std::size_t b = mn[a];
      if (a == 1 || (x[j] - x[a]) * static_cast<double>(a - b) < (x[a] - x[b]) * static_cast<double>(j - a)) break;
      mn[j] = b;
    }
  }
  mj[n] = n;
  for (std::size_t k = n - 1; k >= 1; --k) {
    mj[k] = k + 1;
    for (;;) {
      const std::size_t a = mj[k];
      const std::size_t b = mj[a];
      if (a == n || (x[k] - x[a]) * (static_cast<double>(a) - static_cast<double>(b)) <
                        (x[a] - x[b]) * (static_cast<double>(k) - static_cast<double>(a))) break;
      mj[k] = b;
    }
  }

  double dip = 1.0;
  for (;;) {
    std::size_t lg = 1;
    gcm[1] = high;
    while (gcm[lg] > low) {
      gcm[lg + 1] = mn[gcm[lg]];
      ++lg;
    }
    std::size_t ll = 1;
    lcm[1] = low;
    while (lcm[ll] < high) {
      lcm[ll + 1] = mj[lcm[ll]];
      ++ll;
    }
    std::size_t ig = lg;
    std::size_t ih = ll;
    std::size_t ix = lg - 1;
    std::size_t iv = 2;

    double d = 0.0;
    if (lg != 2 || ll != 2) {
      do {
        const std::size_t gx = gcm[ix];
        const std::size_t lv = lcm[iv];
        if (gx > lv) {
          const std::size_t g1 = gcm[ix + 1];
          const double dx = static_cast<double>(lv - g1 + 1) -
                            (x[lv] - x[g1]) * static_cast<double>(gx - g1) / (x[gx] - x[g1]);
          ++iv;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv - 1;
          }
        } else {
          const std::size_t l1 = lcm[iv - 1];
          const double dx = (x[gx] - x[l1]) * static_cast<double>(lv - l1) / (x[lv] - x[l1]) -
                            (static_cast<double>(gx) - static_cast<double>(l1) - 1.0);
          --ix;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv;
          }
        }
        if (ix < 1) ix = 1;
        if (iv > ll) iv = ll;
      } while (gcm[ix] != lcm[iv]);
    } else {
      d = 1.0;
    }
    if (d < dip) break;

    double dip_l = 0.0;
    for (std::size_t j = ig; j < lg; ++j) {
      double best = 1.0;
      const std::size_t jb = gcm[j + 1];
      const std::size_t je = gcm[j];
      if (je - jb > 1 && x[je] != x[jb]) {
        const double c = static_cast<double>(je - jb) / (x[je] - x[jb]);
        for (std::size_t jj = jb; jj <= je; ++jj)
          best = std::max(best, static_cast<double>(jj - jb + 1) - (x[jj] - x[jb]) * c);
      }
      dip_l = std::max(dip_l, best);
    }
    double dip_u = 0.0;
    for (std::size_t j = ih; j < ll; ++j) {
      double best = 1.0;
      const std::size_t jb = lcm[j];
      const std::size_t je = lcm[j + 1];
      if (je - jb > 1 && x[je] != x[jb]) {
        const double c = static_cast<double>(je - jb) / (x[je] - x[jb]);
        for (std::size_t jj = jb; jj <= je; ++jj)
          best = std::max(best, (x[jj] - x[jb]) * c - (static_cast<double>(jj) - static_cast<double>(jb) - 1.0));
      }
      dip_u = std::max(dip_u, best);
    }
    dip = std::max(dip, std::max(dip_l, dip_u));

    if (low == gcm[ig] && high == lcm[ih]) break;
    low = gcm[ig];
    high = lcm[ih];
  }
  return dip;
}

}  // namespace

DipResult dip_statistic(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 2) throw SizeError("dip statistic needs at least two values (got " + std::to_string(n) + ")");
  std::vector<double> x(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(sample[i])) throw ParameterError("dip statistic needs finite values");
    x[i + 1] = sample[i];
  }
  std::sort(x.begin() + 1, x.end());
  std::size_t low = 1;
  std::size_t high = n;
  const double counts = dip_counts(x, n, low, high);
  DipResult r;
  r.n = n;
  r.dip = counts / (2.0 * static_cast<double>(n));
  r.modal_low = x[low];
  r.modal_high = x[high];
  return r;
}

double dip_pvalue(std::span<const double> sample, std::size_t replicates, std::uint64_t seed, unsigned jobs) {
  if (replicates == 0) throw ParameterError("dip p-value needs at least one replicate");
  const double observed = dip_statistic(sample).dip;
  const std::size_t n = sample.size();
  std::vector<char> hit(replicates, 0);
  auto work = [&](std::size_t first, std::size_t step) {
    std::vector<double> u(n);
    for (std::size_t b = first; b < replicates; b += step) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(b & 0xffffffffu), static_cast<std::uint32_t>(b >> 32)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      for (double& v : u) v = unif(rng);
      hit[b] = dip_statistic(u).dip >= observed;
    }
  };
  const unsigned workers = std::max(1u, jobs);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t, workers);
    for (auto& th : pool) th.join();
  }
  const auto count = static_cast<double>(std::count(hit.begin(), hit.end(), 1));
  return (1.0 + count) / (static_cast<double>(replicates) + 1.0);
}

MdsResult mds_1d(const DistanceMatrix& dist) {
  const std::size_t m = dist.size();
  MdsResult res;
  res.coords.assign(m, 0.0);
  if (m == 0) return res;

  std::vector<double> b(m * m);
  std::vector<double> row_mean(m, 0.0);
  double all_mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double sq = dist(i, j) * dist(i, j);
      b[i * m + j] = sq;
      row_mean[i] += sq;
    }
    all_mean += row_mean[i];
    row_mean[i] /= static_cast<double>(m);
  }
  all_mean /= static_cast<double>(m * m);
  double norm = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double& v = b[i * m + j];
      v = -0.5 * (v - row_mean[i] - row_mean[j] + all_mean);
      norm = std::max(norm, std::abs(v));
    }
  }
  if (norm == 0.0) return res;

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> start(m);
  for (double& v : start) v = unif(rng);

  auto power = [&](double shift, std::vector<double>& vec, double& eig) -> bool {
    vec = start;
    auto normalize = [&](std::vector<double>& v) {
      double s = 0.0;
      for (double e : v) s += e * e;
      s = std::sqrt(s);
      if (s == 0.0) return false;
      for (double& e : v) e /= s;
      return true;
    };
    normalize(vec);
    std::vector<double> next(m);
    for (std::size_t it = 1; it <= 10000; ++it) {
      for (std::size_t i = 0; i < m; ++i) {
        double s = shift * vec[i];
        for (std::size_t j = 0; j < m; ++j) s += b[i * m + j] * vec[j];
        next[i] = s;
      }
      eig = 0.0;
      for (std::size_t i = 0; i < m; ++i) eig += vec[i] * next[i];
      if (!normalize(next)) {
        eig = 0.0;
        res.iterations += it;
        return true;
      }
      double diff_same = 0.0;
      double diff_flip = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        diff_same = std::max(diff_same, std::abs(next[i] - vec[i]));
        diff_flip = std::max(diff_flip, std::abs(next[i] + vec[i]));
      }
      vec.swap(next);
      if (std::min(diff_same, diff_flip) < 1e-10) {
        res.iterations += it;
        return true;
      }
    }
    res.iterations += 10000;
    return false;
  };

  std::vector<double> vec;
  double eig = 0.0;
  double shift = 0.0;
  bool ok = power(0.0, vec, eig);
  if (!ok) {
    // Eigenvalues of equal magnitude and opposite sign; make B + sI PSD.
    double bound = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += std::abs(b[i * m + j]);
      bound = std::max(bound, s);
    }
    shift = bound;
  } else if (eig < 0.0) {
    shift = std::abs(eig);
  }
  if (shift > 0.0) {
    ok = power(shift, vec, eig);
    eig -= shift;
  }
  if (!ok) {
    throw ConvergenceError("1-D MDS power iteration did not converge after " + std::to_string(res.iterations) +
                           " iterations (m = " + std::to_string(m) + ")");
  }
  res.eigenvalue = eig;
  if (eig < 0.0) {
    res.clamped = true;
    eig = 0.0;
  }
  const double scale = std::sqrt(eig);
  std::size_t big = 0;
  for (std::size_t i = 1; i < m; ++i)
    if (std::abs(vec[i]) > std::abs(vec[big])) big = i;
  const double sign = vec[big] < 0.0 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < m; ++i) res.coords[i] = sign * scale * vec[i];
  return res;
}

SampleMode parse_sample_mode(const std::string& text) {
  if (text == "auto") return SampleMode::Auto;
  if (text == "distances") return SampleMode::Distances;
  if (text == "mds") return SampleMode::Mds;
  throw ParameterError("unknown sample mode '" + text + "' (expected auto, distances or mds)");
}

std::string to_string(SampleMode mode) {
  switch (mode) {
    case SampleMode::Auto: return "auto";
    case SampleMode::Distances: return "distances";
    case SampleMode::Mds: return "mds";
  }
  return "auto";
}

std::vector<double> clusterability_sample(const DistanceMatrix& dist, SampleMode mode, std::size_t mds_threshold) {
  if (mode == SampleMode::Auto) mode = dist.size() <= mds_threshold ? SampleMode::Distances : SampleMode::Mds;
  if (mode == SampleMode::Distances) return dist.upper_triangle();
  return mds_1d(dist).coords;
}

double quantile(std::vector<double> values, double prob) {
  if (values.empty()) throw SizeError("quantile of an empty collection");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::string to_string(ClusterLabel label) {
  switch (label) {
    case ClusterLabel::High: return "high";
    case ClusterLabel::Low: return "low";
    case ClusterLabel::Middle: return "middle";
  }
  return "middle";
}

std::string to_string(LabelBasis basis) {
  return basis == LabelBasis::DipStatistic ? "dip" : "pvalue";
}

std::vector<ClusterLabel> classify_collection(std::span<const DipEntry> entries, LabelBasis basis) {
  if (entries.size() < 2) throw SizeError("classification needs at least two entries");
  std::vector<double> v;
  v.reserve(entries.size());
  for (const auto& e : entries) v.push_back(basis == LabelBasis::DipStatistic ? e.dip : e.pvalue);
  const double q05 = quantile(v, 0.05);
  const double q95 = quantile(v, 0.95);
  std::vector<ClusterLabel> out;
  out.reserve(v.size());
  for (double x : v) {
    const bool at_top = x >= q95;
    const bool at_bottom = x <= q05;
    const bool high = basis == LabelBasis::DipStatistic ? at_top : at_bottom;
    const bool low = basis == LabelBasis::DipStatistic ? at_bottom : at_top;
    out.push_back(high == low ? ClusterLabel::Middle : high ? ClusterLabel::High : ClusterLabel::Low);
  }
  return out;
}

}  // namespace domp
