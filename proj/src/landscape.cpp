#include "lscan/landscape.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

namespace lscan {

std::vector<double> ResidueFamily::alphas() const {
  std::vector<double> out(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) out[static_cast<std::size_t>(i)] = alpha(i);
  return out;
}

ResidueFamily make_family(const Mat& m0, const Mat& m1, double a, double b, int K) {
  if (m0.rows() != m1.rows() || m0.cols() != m1.cols()) throw ShapeMismatch("residue family: M0 and M1 differ in shape");
  if (K < 2) throw ValidationError("residue family: K must be at least 2");
  if (!(a < b)) throw ValidationError("residue family: window must satisfy a < b");
  require_finite(m0, "M0");
  require_finite(m1, "M1");
  return {m0, m1, a, b, K};
}

ResidueFamily make_family(const CollocationSystem& sys, double a, double b, int K) {
  return make_family(sys.M0(), sys.M1(), a, b, K);
}

Mat residue_at(const ResidueFamily& fam, double alpha) {
  if (!std::isfinite(alpha)) throw ValidationError("residue_at: non-finite alpha");
  return fam.M0 - alpha * fam.M1;
}

Background remove_background(const std::vector<double>& raw, const std::vector<double>& alphas) {
  const std::size_t k = raw.size();
  if (k < 2 || alphas.size() != k) throw ValidationError("remove_background: need K >= 2 matching samples");
  const std::size_t n = std::min(k, std::max<std::size_t>(5, k / 100));
  double ma = 0.0, ms = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += alphas[i];
    ms += raw[i];
  }
  ma /= static_cast<double>(n);
  ms /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (alphas[i] - ma) * (raw[i] - ms);
    sxx += (alphas[i] - ma) * (alphas[i] - ma);
  }
  Background bg;
  bg.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  bg.slope_fd = (raw[1] - raw[0]) / (alphas[1] - alphas[0]);
  const double scale = std::max(std::abs(bg.slope), std::abs(bg.slope_fd));
  bg.disagree = scale > 0.0 && std::abs(bg.slope - bg.slope_fd) > 0.2 * scale;
  bg.detrended.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double p = bg.slope * alphas[i];
    // nudge by ulps toward the d whose d + s*alpha is closest to raw; exact whenever reachable
    double d = raw[i] - p;
    double best = d, err = std::abs((d + p) - raw[i]);
    for (double dir : {-1.0, 1.0}) {
      double t = d;
      for (int k = 0; k < 8 && err > 0.0; ++k) {
        t = std::nextafter(t, dir * std::numeric_limits<double>::infinity());
        const double e = std::abs((t + p) - raw[i]);
        if (e < err) {
          err = e;
          best = t;
        }
      }
    }
    d = best;
    bg.detrended[i] = d;
  }
  return bg;
}

namespace {

LandscapeScan finish(std::vector<double> alphas, std::vector<double> sigmas) {
  LandscapeScan s;
  auto bg = remove_background(sigmas, alphas);
  s.alphas = std::move(alphas);
  s.sigmas = std::move(sigmas);
  s.sigmas_detrended = std::move(bg.detrended);
  s.slope = bg.slope;
  s.slope_fd = bg.slope_fd;
  s.slope_warning = bg.disagree;
  if (s.slope_warning)
    std::cerr << "warning: background slope estimates disagree (least squares " << s.slope << ", forward difference "
              << s.slope_fd << ")\n";
  return s;
}

}  // namespace

LandscapeScan scan_serial(const ResidueFamily& fam) {
  std::vector<double> alphas = fam.alphas();
  std::vector<double> sigmas(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) sigmas[i] = svd_min(residue_at(fam, alphas[i])).sigma;
  return finish(std::move(alphas), std::move(sigmas));
}

LandscapeScan scan(const ResidueFamily& fam, int workers) {
  std::vector<double> alphas = fam.alphas();
  std::vector<double> sigmas(alphas.size());
  const int nt = workers > 0 ? workers : omp_get_max_threads();
  const long k = static_cast<long>(alphas.size());
#pragma omp parallel for num_threads(nt) schedule(dynamic, 16)
  for (long i = 0; i < k; ++i) {
    const auto u = static_cast<std::size_t>(i);
    sigmas[u] = svd_min(residue_at(fam, alphas[u])).sigma;
  }
  return finish(std::move(alphas), std::move(sigmas));
}

double lipschitz_excess(const LandscapeScan& s, const ResidueFamily& fam) {
  const double l = singular_values(fam.M1)(0);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < s.sigmas.size(); ++i) {
    const double lhs = std::abs(s.sigmas[i + 1] - s.sigmas[i]);
    const double rhs = std::abs(s.alphas[i + 1] - s.alphas[i]) * l;
    // rounding slack of a few ulps of the residue norm
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() *
                         (max_norm(fam.M0) + std::abs(s.alphas[i + 1]) * max_norm(fam.M1)) *
                         std::sqrt(static_cast<double>(fam.M0.size()));
    worst = std::max(worst, lhs - rhs - slack);
  }
  return worst;
}

std::vector<double> DipSet::positions() const {
  std::vector<double> out;
  for (const auto& d : dips) out.push_back(d.alpha_star);
  return out;
}

DipSet detect_dips(const std::vector<double>& alphas, const std::vector<double>& curve, double eps) {
  if (!(eps > 0.0)) throw ValidationError("detect_dips: threshold must be positive");
  if (alphas.size() != curve.size()) throw ShapeMismatch("detect_dips: length mismatch");
  DipSet ds;
  ds.threshold = eps;
  std::size_t i = 0;
  const std::size_t k = curve.size();
  while (i < k) {
    if (!(curve[i] < eps)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < k && curve[j + 1] < eps) ++j;
    std::size_t best = i;
    for (std::size_t t = i + 1; t <= j; ++t)
      if (curve[t] < curve[best]) best = t;
    ds.dips.push_back({alphas[best], curve[best], alphas[i], alphas[j]});
    i = j + 1;
  }
  return ds;
}

DipSet detect_dips(const LandscapeScan& s, double eps) { return detect_dips(s.alphas, s.sigmas_detrended, eps); }

double default_threshold(const LandscapeScan& s) {
  std::vector<double> v = s.sigmas_detrended;
  const std::size_t q = v.size() / 10;
  std::nth_element(v.begin(), v.begin() + static_cast<long>(q), v.end());
  const double t = 3.0 * v[q];
  return t > 0.0 ? t : std::numeric_limits<double>::min();
}

std::vector<int> density_histogram(const std::vector<double>& values, double a, double b, int bins) {
  if (bins < 1) throw ValidationError("density_histogram: bins must be positive");
  if (!(a < b)) throw ValidationError("density_histogram: window must satisfy a < b");
  std::vector<int> h(static_cast<std::size_t>(bins), 0);
  const double w = (b - a) / bins;
  for (double x : values) {
    if (x < a || x > b) continue;
    int i = static_cast<int>(std::floor((x - a) / w));
    h[static_cast<std::size_t>(std::clamp(i, 0, bins - 1))]++;
  }
  return h;
}

}  // namespace lscan
