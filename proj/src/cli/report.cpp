#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "climact/csv.hpp"
#include "climact/serialize.hpp"
#include "svg.hpp"

namespace climact {

namespace fs = std::filesystem;

namespace {

struct Panel {
  std::string title;
  std::vector<std::string> coeff_names;  // row order, top to bottom
};

// Coefficient panels grouped by target equation: sympathy, activation,
// and the two interaction-term vectors.
std::vector<Panel> coefficient_panels(
    const std::vector<FitDocument>& fits) {
  auto collect = [&](auto predicate) {
    std::vector<std::string> names;
    for (const FitDocument& doc : fits)
      for (const ParamSummary& p : doc.parameters)
        if (predicate(p.name) &&
            std::find(names.begin(), names.end(), p.name) == names.end())
          names.push_back(p.name);
    return names;
  };
  auto starts_with = [](const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
  };
  std::vector<Panel> panels(4);
  panels[0].title = "(a) sympathy";
  panels[0].coeff_names = collect([&](const std::string& n) {
    return starts_with(n, "beta_S");
  });
  panels[1].title = "(b) activation";
  panels[1].coeff_names = collect([&](const std::string& n) {
    return starts_with(n, "beta_A");
  });
  panels[2].title = "(c) sympathy x subreddit scores";
  panels[2].coeff_names = collect([&](const std::string& n) {
    return starts_with(n, "beta_p1_");
  });
  panels[3].title = "(d) participation x subreddit scores";
  panels[3].coeff_names = collect([&](const std::string& n) {
    return starts_with(n, "beta_I1_");
  });
  return panels;
}

std::string render_errorbars(const std::vector<FitDocument>& fits) {
  const std::vector<Panel> panels = coefficient_panels(fits);
  const int panel_w = 340, row_h = 18, margin_top = 48, margin_left = 150;
  int max_rows = 1;
  for (const Panel& p : panels)
    max_rows = std::max(max_rows, static_cast<int>(p.coeff_names.size()));
  const int panel_h = margin_top + row_h * max_rows + 30;
  const int cols = 2;
  const int rows = 2;
  Svg svg(panel_w * cols + 40, panel_h * rows + 50);

  for (std::size_t i = 0; i < fits.size(); ++i) {
    svg.circle(30 + 150.0 * static_cast<double>(i), 16, 4, series_color(i));
    svg.text(40 + 150.0 * static_cast<double>(i), 20,
             "var_S = " + format_double(fits[i].var_s), 11);
  }

  for (std::size_t pi = 0; pi < panels.size(); ++pi) {
    const Panel& panel = panels[pi];
    const double ox = 20.0 + static_cast<double>(pi % cols) * panel_w;
    const double oy = 40.0 + static_cast<double>(pi / cols) * panel_h;
    svg.text(ox + 4, oy + 12, panel.title, 12, "start", "#000000");
    if (panel.coeff_names.empty()) continue;

    double lo = 0.0, hi = 0.0;
    for (const FitDocument& doc : fits)
      for (const ParamSummary& p : doc.parameters)
        if (std::find(panel.coeff_names.begin(), panel.coeff_names.end(),
                      p.name) != panel.coeff_names.end()) {
          lo = std::min(lo, p.ci_low);
          hi = std::max(hi, p.ci_high);
        }
    if (!(hi > lo)) hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    const double x0 = ox + margin_left;
    const double x1 = ox + panel_w - 16;
    auto xmap = [&](double v) {
      return x0 + (v - lo) / (hi - lo) * (x1 - x0);
    };
    const double y_top = oy + margin_top;
    const double y_bot =
        y_top + row_h * static_cast<double>(panel.coeff_names.size());

    // zero line + frame
    svg.line(xmap(0.0), y_top - 6, xmap(0.0), y_bot, "#bbbbbb", 1.0);
    svg.line(x0, y_bot, x1, y_bot, "#444444", 1.0);
    for (double tick : {lo + pad, 0.0, hi - pad}) {
      svg.line(xmap(tick), y_bot, xmap(tick), y_bot + 4, "#444444", 1.0);
      svg.text(xmap(tick), y_bot + 16, format_double(std::round(tick * 100) / 100),
               9, "middle");
    }

    for (std::size_t row = 0; row < panel.coeff_names.size(); ++row) {
      const std::string& name = panel.coeff_names[row];
      const double yc = y_top + row_h * (static_cast<double>(row) + 0.5);
      svg.text(x0 - 6, yc + 4, name, 10, "end");
      for (std::size_t si = 0; si < fits.size(); ++si) {
        const auto& params = fits[si].parameters;
        const auto it =
            std::find_if(params.begin(), params.end(),
                         [&](const ParamSummary& p) { return p.name == name; });
        if (it == params.end()) continue;
        const double dy =
            yc + (static_cast<double>(si) -
                  static_cast<double>(fits.size() - 1) / 2.0) *
                     4.0;
        svg.line(xmap(it->ci_low), dy, xmap(it->ci_high), dy,
                 series_color(si), 1.5);
        svg.circle(xmap(it->mean), dy, 2.5, series_color(si));
      }
    }
  }
  return svg.str();
}

struct HistBins {
  double lo = 0.0, width = 0.0;
  std::vector<std::size_t> count_a0, count_a1;
};

HistBins sympathy_hist(const FitDocument& doc, std::size_t n_bins) {
  HistBins h;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (const SympathyEntry& s : doc.sympathy) {
    if (first) {
      lo = hi = s.mean;
      first = false;
    }
    lo = std::min(lo, s.mean);
    hi = std::max(hi, s.mean);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  h.lo = lo;
  h.width = (hi - lo) / static_cast<double>(n_bins);
  h.count_a0.assign(n_bins, 0);
  h.count_a1.assign(n_bins, 0);
  for (const SympathyEntry& s : doc.sympathy) {
    std::size_t bin = static_cast<std::size_t>((s.mean - lo) / h.width);
    bin = std::min(bin, n_bins - 1);
    (s.activated ? h.count_a1 : h.count_a0)[bin]++;
  }
  return h;
}

std::string render_sympathy_svg(const std::vector<FitDocument>& fits,
                                std::size_t n_bins) {
  const int panel_w = 300, panel_h = 220;
  Svg svg(panel_w * static_cast<int>(fits.size()) + 20, panel_h + 40);
  svg.circle(24, 14, 4, "#1f77b4");
  svg.text(32, 18, "A = 0", 11);
  svg.circle(90, 14, 4, "#d62728");
  svg.text(98, 18, "A = 1", 11);

  for (std::size_t fi = 0; fi < fits.size(); ++fi) {
    const HistBins h = sympathy_hist(fits[fi], n_bins);
    const double ox = 10.0 + static_cast<double>(fi) * panel_w;
    const double oy = 30.0;
    svg.text(ox + panel_w / 2.0, oy + 10,
             "var_S = " + format_double(fits[fi].var_s), 12, "middle",
             "#000000");
    std::size_t peak = 1;
    for (std::size_t b = 0; b < n_bins; ++b)
      peak = std::max({peak, h.count_a0[b], h.count_a1[b]});
    const double plot_h = panel_h - 60;
    const double base = oy + 30 + plot_h;
    const double bar_w = (panel_w - 40.0) / static_cast<double>(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
      const double x = ox + 20 + bar_w * static_cast<double>(b);
      const double h0 =
          plot_h * static_cast<double>(h.count_a0[b]) / static_cast<double>(peak);
      const double h1 =
          plot_h * static_cast<double>(h.count_a1[b]) / static_cast<double>(peak);
      svg.rect(x, base - h0, bar_w, h0, "#1f77b4", 0.5);
      svg.rect(x, base - h1, bar_w, h1, "#d62728", 0.5);
    }
    svg.line(ox + 20, base, ox + panel_w - 20, base, "#444444", 1.0);
    svg.text(ox + 20, base + 14, format_double(std::round(h.lo * 100) / 100),
             9, "middle");
    svg.text(ox + panel_w - 20, base + 14,
             format_double(
                 std::round((h.lo + h.width * static_cast<double>(n_bins)) * 100) /
                 100),
             9, "middle");
  }
  return svg.str();
}

struct AblationRow {
  double var_s = 0.0;
  std::string variant;
  double mean = 0.0;
  double sd = 0.0;
};

std::string render_ablation_svg(const std::vector<AblationRow>& rows) {
  std::vector<double> sweeps;
  std::vector<std::string> variants;
  for (const AblationRow& r : rows) {
    if (std::find(sweeps.begin(), sweeps.end(), r.var_s) == sweeps.end())
      sweeps.push_back(r.var_s);
    if (std::find(variants.begin(), variants.end(), r.variant) ==
        variants.end())
      variants.push_back(r.variant);
  }
  const int width = 560, height = 320;
  Svg svg(width, height);
  double lo = 1.0, hi = 0.0;
  for (const AblationRow& r : rows) {
    lo = std::min(lo, r.mean - r.sd);
    hi = std::max(hi, r.mean + r.sd);
  }
  lo = std::max(0.0, lo - 0.02);
  hi = std::min(1.0, hi + 0.02);
  if (!(hi > lo)) hi = lo + 0.1;
  const double x0 = 70, x1 = width - 20, y0 = 40, y1 = height - 50;
  auto ymap = [&](double v) { return y1 - (v - lo) / (hi - lo) * (y1 - y0); };
  svg.line(x0, y1, x1, y1, "#444444", 1.0);
  svg.line(x0, y0, x0, y1, "#444444", 1.0);
  for (int i = 0; i <= 4; ++i) {
    const double v = lo + (hi - lo) * i / 4.0;
    svg.line(x0 - 4, ymap(v), x0, ymap(v), "#444444", 1.0);
    svg.text(x0 - 8, ymap(v) + 4, format_double(std::round(v * 1000) / 1000),
             9, "end");
  }
  svg.text(16, (y0 + y1) / 2, "accuracy", 11, "middle");

  const double group_w =
      (x1 - x0) / static_cast<double>(variants.size());
  for (std::size_t vi = 0; vi < variants.size(); ++vi) {
    const double xc = x0 + group_w * (static_cast<double>(vi) + 0.5);
    svg.text(xc, y1 + 18, variants[vi], 11, "middle");
    for (std::size_t si = 0; si < sweeps.size(); ++si) {
      const auto it = std::find_if(rows.begin(), rows.end(), [&](const AblationRow& r) {
        return r.variant == variants[vi] && r.var_s == sweeps[si];
      });
      if (it == rows.end()) continue;
      const double x =
          xc + (static_cast<double>(si) -
                static_cast<double>(sweeps.size() - 1) / 2.0) *
                   14.0;
      svg.line(x, ymap(it->mean - it->sd), x, ymap(it->mean + it->sd),
               series_color(si), 1.5);
      svg.circle(x, ymap(it->mean), 3.0, series_color(si));
    }
  }
  for (std::size_t si = 0; si < sweeps.size(); ++si) {
    svg.circle(30 + 150.0 * static_cast<double>(si), 16, 4, series_color(si));
    svg.text(40 + 150.0 * static_cast<double>(si), 20,
             "var_S = " + format_double(sweeps[si]), 11);
  }
  return svg.str();
}

}  // namespace

void write_report(const std::string& in_dir, const std::string& out_dir) {
  if (!fs::is_directory(in_dir))
    throw std::invalid_argument("report: input directory '" + in_dir +
                                "' does not exist");
  std::vector<std::string> fit_files;
  for (const auto& entry : fs::directory_iterator(in_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("fit_", 0) == 0 && entry.path().extension() == ".json")
      fit_files.push_back(entry.path().string());
  }
  std::sort(fit_files.begin(), fit_files.end());
  if (fit_files.empty())
    throw std::invalid_argument("report: no fit_*.json files in '" + in_dir +
                                "'");

  std::vector<FitDocument> all;
  for (const std::string& f : fit_files)
    all.push_back(fit_document_from_json(read_text_file(f), f));

  // Full-model fits drive the coefficient and sympathy figures, sorted
  // by var_s for stable series order.
  std::vector<FitDocument> fulls;
  for (FitDocument& doc : all)
    if (doc.variant == "full") fulls.push_back(std::move(doc));
  std::stable_sort(fulls.begin(), fulls.end(),
                   [](const FitDocument& a, const FitDocument& b) {
                     return a.var_s < b.var_s;
                   });
  if (fulls.empty())
    throw std::invalid_argument("report: no full-model fit documents in '" +
                                in_dir + "'");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw std::invalid_argument("report: cannot create output directory '" +
                                out_dir + "'");

  {
    std::ostringstream csv;
    csv << "name,mean,ci_low,ci_high,var_s\n";
    for (const FitDocument& doc : fulls)
      for (const ParamSummary& p : doc.parameters)
        csv << p.name << ',' << format_double(p.mean) << ','
            << format_double(p.ci_low) << ',' << format_double(p.ci_high)
            << ',' << format_double(doc.var_s) << '\n';
    write_text_file(out_dir + "/coefficients.csv", csv.str());
  }

  write_text_file(out_dir + "/errorbars.svg", render_errorbars(fulls));

  {
    const std::size_t n_bins = 30;
    std::ostringstream csv;
    csv << "var_s,bin_low,bin_high,count_a0,count_a1\n";
    for (const FitDocument& doc : fulls) {
      const HistBins h = sympathy_hist(doc, n_bins);
      for (std::size_t b = 0; b < n_bins; ++b)
        csv << format_double(doc.var_s) << ','
            << format_double(h.lo + h.width * static_cast<double>(b)) << ','
            << format_double(h.lo + h.width * static_cast<double>(b + 1))
            << ',' << h.count_a0[b] << ',' << h.count_a1[b] << '\n';
    }
    write_text_file(out_dir + "/sympathy_hist.csv", csv.str());
    write_text_file(out_dir + "/sympathy_hist.svg",
                    render_sympathy_svg(fulls, n_bins));
  }

  const std::string ablation_in = in_dir + "/ablation.csv";
  if (fs::exists(ablation_in)) {
    const CsvTable t = read_csv(ablation_in);
    const int c_vs = t.require_col("var_s");
    const int c_variant = t.require_col("variant");
    const int c_mean = t.require_col("accuracy_mean");
    const int c_sd = t.require_col("accuracy_sd");
    std::vector<AblationRow> rows;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
      rows.push_back({t.number(r, c_vs), t.cell(r, c_variant),
                      t.number(r, c_mean), t.number(r, c_sd)});
    write_text_file(out_dir + "/ablation.csv", read_text_file(ablation_in));
    write_text_file(out_dir + "/ablation.svg", render_ablation_svg(rows));
  }
}

}  // namespace climact
