#include "qwork/plots.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace qwork {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 20, kTop = 30, kBottom = 60;

struct Axes {
  double x0, x1, y0, y1;  // y in log10 units
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double logy) const {
    return kHeight - kBottom - (logy - y0) / (y1 - y0) * (kHeight - kTop - kBottom);
  }
};

std::string num(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << v;
  return os.str();
}

void frame(std::ostringstream& os, const Axes& ax, const std::string& xlabel,
           const std::string& ylabel) {
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
     << "\" height=\"" << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(ax.y0)); d <= static_cast<int>(std::floor(ax.y1)); ++d) {
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(ax.py(d) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">1e" << d << "</text>\n";
    os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + 5 << "\" y1=\"" << num(ax.py(d))
       << "\" y2=\"" << num(ax.py(d)) << "\" stroke=\"black\"/>\n";
  }
  // Round tick step: 1, 2 or 5 times a power of ten, about six ticks.
  const double raw = (ax.x1 - ax.x0) / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double step = raw / mag < 1.5 ? mag : raw / mag < 3.5 ? 2 * mag : raw / mag < 7.5 ? 5 * mag : 10 * mag;
  for (double x = std::ceil(ax.x0 / step) * step; x <= ax.x1 + 1e-9 * step; x += step) {
    const double xr = std::abs(x) < 1e-9 * step ? 0.0 : x;
    std::ostringstream label;
    label << xr;
    os << "<text x=\"" << num(ax.px(xr)) << "\" y=\"" << kHeight - kBottom + 18
       << "\" font-size=\"11\" text-anchor=\"middle\">" << label.str() << "</text>\n";
    os << "<line x1=\"" << num(ax.px(xr)) << "\" x2=\"" << num(ax.px(xr)) << "\" y1=\"" << kHeight - kBottom
       << "\" y2=\"" << kHeight - kBottom - 5 << "\" stroke=\"black\"/>\n";
  }
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 15
     << "\" font-size=\"13\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  os << "<text x=\"18\" y=\"" << kHeight / 2 << "\" font-size=\"13\" text-anchor=\"middle\""
     << " transform=\"rotate(-90 18 " << kHeight / 2 << ")\">" << ylabel << "</text>\n";
}

std::string header() {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

void polyline(std::ostringstream& os, const Axes& ax, const std::vector<double>& w,
              const std::vector<double>& p, double w_scale, const char* style) {
  const double floor = std::pow(10.0, ax.y0);
  os << "<polyline fill=\"none\" " << style << " points=\"";
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double x = w[j] * w_scale;
    if (x < ax.x0 || x > ax.x1) continue;
    os << num(ax.px(x)) << ',' << num(ax.py(std::log10(std::max(p[j], floor)))) << ' ';
  }
  os << "\"/>\n";
}

}  // namespace

std::string spectra_svg(const WorkSpectrum& fwd, const WorkSpectrum& bwd,
                        const std::vector<Peak>& fwd_peaks, const std::vector<Peak>& bwd_peaks,
                        double w_scale, const std::string& w_unit) {
  const WorkSpectrum mirrored = bwd.mirrored();
  double pmax = 0.0;
  for (double v : fwd.density) pmax = std::max(pmax, v);
  for (double v : bwd.density) pmax = std::max(pmax, v);
  if (!(pmax > 0.0)) pmax = 1.0;
  const double top = std::ceil(std::log10(pmax));
  const Axes ax{fwd.w.front() * w_scale, fwd.w.back() * w_scale, top - 6.0, top};

  std::ostringstream os;
  os << header();
  frame(os, ax, "W [" + w_unit + "]", "P(W)");
  polyline(os, ax, fwd.w, fwd.density, w_scale, "stroke=\"#1f4e9c\" stroke-width=\"1.2\"");
  polyline(os, ax, mirrored.w, mirrored.density, w_scale,
           "stroke=\"#c0392b\" stroke-width=\"1.2\" stroke-dasharray=\"5,3\"");
  for (const auto& pk : fwd_peaks) {
    os << "<circle cx=\"" << num(ax.px(pk.w * w_scale)) << "\" cy=\""
       << num(ax.py(std::log10(pk.amplitude))) << "\" r=\"3.5\" fill=\"#1f4e9c\"/>\n";
  }
  for (const auto& pk : bwd_peaks) {
    os << "<circle cx=\"" << num(ax.px(-pk.w * w_scale)) << "\" cy=\""
       << num(ax.py(std::log10(pk.amplitude))) << "\" r=\"3.5\" fill=\"none\" stroke=\"#c0392b\"/>\n";
  }
  os << "<text x=\"" << kWidth - kRight - 10 << "\" y=\"" << kTop + 18
     << "\" font-size=\"12\" text-anchor=\"end\">solid: P_F(W)   dashed: P_B(-W)</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string crooks_svg(const CrooksFit& fit, double beta, double delta_f, double w_scale,
                       const std::string& w_unit) {
  double wmin = fit.points.front().w, wmax = wmin;
  double lmin = std::log10(fit.points.front().ratio), lmax = lmin;
  for (const auto& p : fit.points) {
    wmin = std::min(wmin, p.w);
    wmax = std::max(wmax, p.w);
    lmin = std::min(lmin, std::log10(p.ratio));
    lmax = std::max(lmax, std::log10(p.ratio));
  }
  const double pad = 0.25 * std::max(wmax - wmin, 1.0);
  wmin -= pad;
  wmax += pad;
  lmin = std::floor(std::min(lmin, beta * (wmin - delta_f) / std::log(10.0)));
  lmax = std::ceil(std::max(lmax, beta * (wmax - delta_f) / std::log(10.0)));
  if (lmax <= lmin) lmax = lmin + 1.0;
  const Axes ax{wmin * w_scale, wmax * w_scale, lmin, lmax};

  std::ostringstream os;
  os << header();
  frame(os, ax, "W [" + w_unit + "]", "P_F(W) / P_B(-W)");
  auto line = [&](double slope, double intercept, const char* style) {
    const double y0 = (slope * wmin - intercept) / std::log(10.0);
    const double y1 = (slope * wmax - intercept) / std::log(10.0);
    os << "<line x1=\"" << num(ax.px(wmin * w_scale)) << "\" y1=\"" << num(ax.py(y0)) << "\" x2=\""
       << num(ax.px(wmax * w_scale)) << "\" y2=\"" << num(ax.py(y1)) << "\" " << style << "/>\n";
  };
  line(beta, beta * delta_f, "stroke=\"black\" stroke-width=\"1.5\"");
  line(fit.a, fit.b, "stroke=\"#c0392b\" stroke-dasharray=\"5,3\"");
  for (const auto& p : fit.points) {
    const double x = ax.px(p.w * w_scale), y = ax.py(std::log10(p.ratio));
    os << "<path d=\"M" << num(x - 4) << ' ' << num(y - 4) << " L" << num(x + 4) << ' '
       << num(y + 4) << " M" << num(x - 4) << ' ' << num(y + 4) << " L" << num(x + 4) << ' '
       << num(y - 4) << "\" stroke=\"#1f4e9c\" stroke-width=\"1.5\"/>\n";
  }
  os << "<text x=\"" << kLeft + 10 << "\" y=\"" << kTop + 18 << "\" font-size=\"12\">"
     << "solid: exp(beta (W - dF))   dashed: fit A = " << num(fit.a) << ", B/A = "
     << num(fit.delta_f_hat()) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace qwork
