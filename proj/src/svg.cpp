#include "autorisk/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace autorisk {

namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 500;
constexpr double kMarginLeft = 70;
constexpr double kMarginRight = 30;
constexpr double kMarginTop = 50;
constexpr double kMarginBottom = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void open_svg(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2
      << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"18\">"
      << title << "</text>\n";
}

}  // namespace

std::string histogram_svg(const RiskDistribution& dist,
                          const std::string& title) {
  std::ostringstream out;
  open_svg(out, title);

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  std::size_t max_count = 1;
  for (auto c : dist.histogram) max_count = std::max(max_count, c);

  const double bin_w = plot_w / static_cast<double>(kHistogramBins);
  for (std::size_t b = 0; b < kHistogramBins; ++b) {
    const double h =
        plot_h * static_cast<double>(dist.histogram[b]) /
        static_cast<double>(max_count);
    const double x = kMarginLeft + bin_w * static_cast<double>(b);
    const double y = kMarginTop + plot_h - h;
    out << "<rect x=\"" << num(x + 1) << "\" y=\"" << num(y) << "\" width=\""
        << num(bin_w - 2) << "\" height=\"" << num(h)
        << "\" fill=\"#4878a8\"/>\n";
  }

  // axes
  out << "<line x1=\"" << num(kMarginLeft) << "\" y1=\""
      << num(kMarginTop + plot_h) << "\" x2=\"" << num(kMarginLeft + plot_w)
      << "\" y2=\"" << num(kMarginTop + plot_h)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(kMarginTop)
      << "\" x2=\"" << num(kMarginLeft) << "\" y2=\""
      << num(kMarginTop + plot_h) << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 10; ++tick) {
    const double frac = static_cast<double>(tick) / 10.0;
    const double x = kMarginLeft + plot_w * frac;
    out << "<line x1=\"" << num(x) << "\" y1=\"" << num(kMarginTop + plot_h)
        << "\" x2=\"" << num(x) << "\" y2=\"" << num(kMarginTop + plot_h + 5)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(x) << "\" y=\"" << num(kMarginTop + plot_h + 20)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << num(frac) << "</text>\n";
  }
  out << "<text x=\"" << num(kMarginLeft + plot_w / 2) << "\" y=\""
      << num(kHeight - 15)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">predicted probability</text>\n";
  out << "<text x=\"20\" y=\"" << num(kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\" transform=\"rotate(-90 20 "
      << num(kMarginTop + plot_h / 2) << ")\">workers</text>\n";
  out << "<text x=\"" << num(kMarginLeft + plot_w) << "\" y=\"44\" "
      << "text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
      << "share above " << num(dist.threshold) << ": "
      << num(dist.high_risk_share * 100) << "% | shape: "
      << to_string(dist.shape) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string isco_bar_svg(const IscoAggregate& agg, const std::string& title) {
  std::ostringstream out;
  open_svg(out, title);

  const double plot_w = kWidth - kMarginLeft - kMarginRight - 60;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const std::size_t n = agg.groups.size();
  const double row_h = plot_h / static_cast<double>(n == 0 ? 1 : n);
  const double bar_h = std::min(row_h * 0.7, 28.0);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& group = agg.groups[i];
    const double y =
        kMarginTop + row_h * static_cast<double>(i) + (row_h - bar_h) / 2;
    const double w = plot_w * group.mean_probability;
    out << "<text x=\"" << num(kMarginLeft - 8) << "\" y=\""
        << num(y + bar_h / 2 + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"13\">"
        << group.prefix << "</text>\n";
    out << "<rect x=\"" << num(kMarginLeft) << "\" y=\"" << num(y)
        << "\" width=\"" << num(w) << "\" height=\"" << num(bar_h)
        << "\" fill=\"#a85948\"/>\n";
    out << "<text x=\"" << num(kMarginLeft + w + 6) << "\" y=\""
        << num(y + bar_h / 2 + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << num(group.mean_probability) << " (" << group.count
        << ")</text>\n";
  }

  out << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(kMarginTop)
      << "\" x2=\"" << num(kMarginLeft) << "\" y2=\""
      << num(kMarginTop + plot_h) << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << num(kMarginLeft + plot_w / 2) << "\" y=\""
      << num(kHeight - 15)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">mean predicted probability</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace autorisk
