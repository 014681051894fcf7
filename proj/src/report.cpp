#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "sobolnoise/errors.hpp"
#include "sobolnoise/harness.hpp"

namespace sobolnoise {

namespace {

void append_number(std::string& out, double value) {
  if (std::isnan(value)) return;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  out += buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + path.string() + " for writing");
  file << content;
  file.flush();
  if (!file) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string format_csv(const ResultTable& table) {
  std::string out =
      "replicate,variable,s_raw,t_raw,s_corr,t_corr,bias_s,bias_t,var_s,var_t,t_t_eps,d_hat\n";
  for (const auto& row : table.rows) {
    out += std::to_string(row.replicate);
    out += ',';
    out += row.variable;
    for (double v : {row.s_raw, row.t_raw, row.s_corr, row.t_corr, row.bias_s, row.bias_t,
                     row.var_s, row.var_t, row.t_t_eps, row.d_hat}) {
      out += ',';
      append_number(out, v);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const ResultTable& table, const std::filesystem::path& path) {
  write_file(path, format_csv(table));
}

namespace {

constexpr double kPanelWidth = 560.0;
constexpr double kPanelHeight = 320.0;
constexpr double kMarginLeft = 60.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 40.0;
constexpr double kPanelGap = 40.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct BoxGeometry {
  SummaryStats stats;
  double whisker_lo = 0.0, whisker_hi = 0.0;
  std::vector<double> outliers;
};

BoxGeometry box_of(const std::vector<double>& values) {
  BoxGeometry g;
  g.stats = summarize(values);
  const double iqr = g.stats.q3 - g.stats.q1;
  const double lo_fence = g.stats.q1 - 1.5 * iqr;
  const double hi_fence = g.stats.q3 + 1.5 * iqr;
  g.whisker_lo = g.stats.q1;
  g.whisker_hi = g.stats.q3;
  for (double v : values) {
    if (std::isnan(v)) continue;
    if (v < lo_fence || v > hi_fence) {
      g.outliers.push_back(v);
    } else {
      g.whisker_lo = std::min(g.whisker_lo, v);
      g.whisker_hi = std::max(g.whisker_hi, v);
    }
  }
  return g;
}

class Panel {
 public:
  Panel(double top, double lo, double hi) : top_(top), lo_(lo), hi_(hi) {}

  double y(double value) const {
    return top_ + kMarginTop + (hi_ - value) / (hi_ - lo_) * (kPanelHeight - kMarginTop - kMarginBottom);
  }
  double top() const { return top_; }
  double plot_bottom() const { return top_ + kPanelHeight - kMarginBottom; }

  void box(std::string& svg, const BoxGeometry& g, double cx, double half_width,
           const char* css_class, const char* fill) const {
    const auto& s = g.stats;
    svg += "    <g class=\"" + std::string(css_class) + "\">\n";
    svg += "      <line x1=\"" + fmt(cx) + "\" y1=\"" + fmt(y(g.whisker_lo)) + "\" x2=\"" +
           fmt(cx) + "\" y2=\"" + fmt(y(g.whisker_hi)) + "\" stroke=\"black\"/>\n";
    svg += "      <rect x=\"" + fmt(cx - half_width) + "\" y=\"" + fmt(y(s.q3)) + "\" width=\"" +
           fmt(2 * half_width) + "\" height=\"" + fmt(y(s.q1) - y(s.q3)) + "\" fill=\"" + fill +
           "\" stroke=\"black\"/>\n";
    svg += "      <line x1=\"" + fmt(cx - half_width) + "\" y1=\"" + fmt(y(s.median)) +
           "\" x2=\"" + fmt(cx + half_width) + "\" y2=\"" + fmt(y(s.median)) +
           "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    for (double v : g.outliers) {
      svg += "      <circle class=\"outlier\" cx=\"" + fmt(cx) + "\" cy=\"" + fmt(y(v)) +
             "\" r=\"2\" fill=\"none\" stroke=\"black\"/>\n";
    }
    svg += "    </g>\n";
  }

 private:
  double top_, lo_, hi_;
};

}  // namespace

std::string format_boxplot_svg(const ResultTable& table) {
  if (table.successful_replicates() < 2) {
    throw ConfigError("box plots need at least 2 successful replicates");
  }
  const std::size_t d = table.dimension();
  const bool noisy = table.noisy;
  const std::size_t groups = d + (noisy ? 1 : 0);
  const double group_width = (kPanelWidth - kMarginLeft - 20.0) / static_cast<double>(groups);
  const double width = kPanelWidth;
  const double height = 2 * kPanelHeight + kPanelGap;

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) +
                    "\" height=\"" + fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " +
                    fmt(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  struct PanelSpec {
    const char* title;
    double ResultRow::*raw;
    double ResultRow::*corr;
    const std::vector<double>* truth;
  };
  const PanelSpec panels[2] = {
      {"Main indices", &ResultRow::s_raw, &ResultRow::s_corr,
       table.truth ? &table.truth->main : nullptr},
      {"Total indices", &ResultRow::t_raw, &ResultRow::t_corr,
       table.truth ? &table.truth->total : nullptr}};

  for (int p = 0; p < 2; ++p) {
    const auto& spec = panels[p];
    std::vector<BoxGeometry> raw_boxes, corr_boxes;
    double lo = 0.0, hi = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      raw_boxes.push_back(box_of(table.column(i, spec.raw)));
      corr_boxes.push_back(box_of(table.column(i, spec.corr)));
      for (const auto* b : {&raw_boxes.back(), &corr_boxes.back()}) {
        lo = std::min(lo, b->stats.min);
        hi = std::max(hi, b->stats.max);
      }
    }
    std::optional<BoxGeometry> virtual_box;
    if (noisy && p == 1) {
      virtual_box = box_of(table.virtual_totals());
      lo = std::min(lo, virtual_box->stats.min);
      hi = std::max(hi, virtual_box->stats.max);
    }
    const double pad = 0.05 * (hi - lo);
    const Panel panel(p * (kPanelHeight + kPanelGap), lo - pad, hi + pad);

    svg += "  <g class=\"panel\" data-index=\"" + std::string(p == 0 ? "main" : "total") + "\">\n";
    svg += "    <text x=\"" + fmt(kMarginLeft) + "\" y=\"" + fmt(panel.top() + 20.0) +
           "\" font-size=\"14\">" + spec.title + "</text>\n";
    for (double tick : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      if (tick < lo - pad || tick > hi + pad) continue;
      svg += "    <line x1=\"" + fmt(kMarginLeft) + "\" y1=\"" + fmt(panel.y(tick)) + "\" x2=\"" +
             fmt(width - 20.0) + "\" y2=\"" + fmt(panel.y(tick)) +
             "\" stroke=\"#dddddd\"/>\n";
      svg += "    <text x=\"" + fmt(kMarginLeft - 6.0) + "\" y=\"" + fmt(panel.y(tick) + 4.0) +
             "\" text-anchor=\"end\">" + fmt(tick).substr(0, 4) + "</text>\n";
    }

    for (std::size_t i = 0; i < d; ++i) {
      const double left = kMarginLeft + group_width * static_cast<double>(i);
      const double half = group_width * (table.corrected ? 0.15 : 0.25);
      svg += "   <g class=\"box-group\" data-variable=\"" + escape(table.variables[i]) + "\">\n";
      if (table.corrected) {
        panel.box(svg, raw_boxes[i], left + group_width * 0.3, half, "box raw", "#bbbbbb");
        panel.box(svg, corr_boxes[i], left + group_width * 0.7, half, "box corrected",
                  "#7aa6d6");
      } else {
        panel.box(svg, raw_boxes[i], left + group_width * 0.5, half, "box raw", "#bbbbbb");
      }
      if (spec.truth) {
        const double ty = panel.y((*spec.truth)[i]);
        svg += "    <circle class=\"truth\" cx=\"" + fmt(left + group_width * 0.5) + "\" cy=\"" +
               fmt(ty) + "\" r=\"4\" fill=\"red\"/>\n";
      }
      svg += "    <text x=\"" + fmt(left + group_width * 0.5) + "\" y=\"" +
             fmt(panel.plot_bottom() + 16.0) + "\" text-anchor=\"middle\">" +
             escape(table.variables[i]) + "</text>\n";
      svg += "   </g>\n";
    }
    if (virtual_box) {
      const double left = kMarginLeft + group_width * static_cast<double>(d);
      svg += "   <g class=\"virtual-group\" data-variable=\"t\">\n";
      panel.box(svg, *virtual_box, left + group_width * 0.5, group_width * 0.25, "box raw",
                "#e0c080");
      svg += "    <text x=\"" + fmt(left + group_width * 0.5) + "\" y=\"" +
             fmt(panel.plot_bottom() + 16.0) + "\" text-anchor=\"middle\">t</text>\n";
      svg += "   </g>\n";
    }
    svg += "  </g>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_boxplot_svg(const ResultTable& table, const std::filesystem::path& path) {
  write_file(path, format_boxplot_svg(table));
}

}  // namespace sobolnoise
