#include "contactline/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "contactline/canonical_json.hpp"
#include "contactline/error.hpp"

namespace contactline {

namespace {

void check_finite(double v, const std::string& what)
{
  if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "non-finite value in " + what, {{"field", what}});
}

std::string fixed(double v, int prec = 4)
{
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

std::string escape_xml(const std::string& s)
{
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

} // namespace

std::vector<std::string> energy_columns()
{
  std::vector<std::string> c{"t",      "E",      "D",      "script_E",     "script_D",          "frak_E",
                             "frak_D", "frak_K", "min_J", "div_residual", "kinematic_residual"};
  for (const auto& n : energy_term_names()) c.push_back("E_" + n);
  for (const auto& n : dissipation_term_names()) c.push_back("D_" + n);
  return c;
}

std::vector<std::string> iteration_columns() { return {"iter", "du", "dp", "deta", "dcorner", "total", "ratio", "K"}; }

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows)
{
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& r : rows) {
    if (r.size() != header.size())
      throw Error(ErrorKind::IoFailure, "CSV row width does not match the header",
                  {{"row", r.size()}, {"header", header.size()}});
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
    out += "\n";
  }
  return out;
}

std::string energy_csv(const EnergyReport& rep)
{
  const auto cols = energy_columns();
  const std::size_t nE = energy_term_names().size(), nD = dissipation_term_names().size();
  std::vector<std::vector<double>> rows;
  for (const auto& s : rep.samples) {
    std::vector<double> r{s.t,      s.E,      s.D,      s.script_E,     s.script_D,          s.frak_E,
                          s.frak_D, s.frak_K, s.min_J, s.div_residual, s.kinematic_residual};
    for (std::size_t i = 0; i < nE; ++i) r.push_back(i < s.E_terms.size() ? s.E_terms[i] : 0.0);
    for (std::size_t i = 0; i < nD; ++i) r.push_back(i < s.D_terms.size() ? s.D_terms[i] : 0.0);
    rows.push_back(std::move(r));
  }
  return csv_table(cols, rows);
}

std::string iterations_csv(const std::vector<IterationRecord>& log)
{
  std::vector<std::vector<double>> rows;
  for (const auto& r : log)
    rows.push_back({static_cast<double>(r.iter), r.d.du, r.d.dp, r.d.deta, r.d.dcorner, r.d.total(), r.ratio, r.K});
  return csv_table(iteration_columns(), rows);
}

nlohmann::json residuals_json(const NonlinearResiduals& r)
{
  return {{"momentum", r.momentum},     {"dynamic", r.dynamic},   {"slip", r.slip},
          {"corner", r.corner},         {"divergence", r.divergence}, {"no_penetration", r.no_penetration},
          {"kinematic", r.kinematic},   {"initial", r.initial},   {"max", r.max()}};
}

nlohmann::json energy_summary_json(const EnergyReport& rep)
{
  double min_J = 1.0;
  for (const auto& s : rep.samples) min_J = std::min(min_J, s.min_J);
  return {{"E0", rep.E0},
          {"sup_E", rep.sup_E},
          {"int_D", rep.int_D},
          {"frak_K", rep.frak_K_solution},
          {"bound_constant", rep.bound_constant},
          {"diffeo_constant", rep.diffeo_constant},
          {"min_J", min_J},
          {"samples", rep.samples.size()},
          {"absent_terms", rep.absent},
          {"differenced_terms", rep.differenced}};
}

nlohmann::json summary_json(const RunReport& rep)
{
  nlohmann::json iters = nlohmann::json::array();
  for (const auto& r : rep.iterations)
    iters.push_back({{"iter", r.iter},
                     {"du", r.d.du},
                     {"dp", r.d.dp},
                     {"deta", r.d.deta},
                     {"dcorner", r.d.dcorner},
                     {"total", r.d.total()},
                     {"ratio", r.ratio},
                     {"K", r.K}});
  nlohmann::json j{{"schema_version", report_schema_version},
                   {"meta",
                    {{"command", rep.meta.command},
                     {"h", rep.meta.h},
                     {"dt", rep.meta.dt},
                     {"eps", rep.meta.eps},
                     {"sigma_small", rep.meta.sigma_small},
                     {"config_hash", rep.meta.config_hash},
                     {"config", rep.meta.config}}},
                   {"energy", energy_summary_json(rep.energy)},
                   {"iterations", iters},
                   {"results", rep.results}};
  return j;
}

std::string line_plot_svg(const std::string& title, const std::string& xlabel, const std::vector<PlotSeries>& series,
                          bool log_y)
{
  const double W = 640, H = 400, L = 70, R = 20, Tm = 40, B = 50;
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series)
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      check_finite(s.x[i], "plot " + title);
      check_finite(s.y[i], "plot " + title);
      if (log_y && s.y[i] <= 0.0) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  const bool empty = !(x0 <= x1);
  if (empty) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 <= 0.0) x1 = x0 + 1.0;
  if (y1 - y0 <= 0.0) {
    const double pad = std::max(std::abs(y0) * 0.1, 1e-12);
    y0 -= pad;
    y1 += pad;
  }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - Tm - B); };
  auto label_y = [&](double v) { return log_y ? "1e" + fixed(v, 3) : fixed(v); };

  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
       escape_xml(title) + "</text>\n";
  s += "<rect x=\"" + fixed(L) + "\" y=\"" + fixed(Tm) + "\" width=\"" + fixed(W - L - R) + "\" height=\"" +
       fixed(H - Tm - B) + "\" fill=\"none\" stroke=\"black\"/>\n";
  s += "<text x=\"" + fixed((L + W - R) / 2) + "\" y=\"" + fixed(H - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + escape_xml(xlabel) + "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = x0 + (x1 - x0) * k / 4.0, fy = y0 + (y1 - y0) * k / 4.0;
    s += "<text x=\"" + fixed(px(fx)) + "\" y=\"" + fixed(H - B + 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + fixed(fx) + "</text>\n";
    s += "<text x=\"" + fixed(L - 6) + "\" y=\"" + fixed(py(fy) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + label_y(fy) + "</text>\n";
  }
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& sr = series[k];
    const std::string color = colors[k % 5];
    std::string pts;
    for (std::size_t i = 0; i < std::min(sr.x.size(), sr.y.size()); ++i) {
      if (log_y && sr.y[i] <= 0.0) continue;
      pts += (pts.empty() ? "" : " ") + fixed(px(sr.x[i]), 6) + "," + fixed(py(ty(sr.y[i])), 6);
    }
    if (!pts.empty())
      s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    s += "<text x=\"" + fixed(W - R - 6) + "\" y=\"" + fixed(Tm + 16 + 14 * static_cast<double>(k)) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + color + "\">" +
         escape_xml(sr.label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec)
    throw Error(ErrorKind::IoFailure, "cannot create directory " + path.parent_path().string(),
                {{"path", path.parent_path().string()}, {"reason", ec.message()}});
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::IoFailure, "cannot open " + path.string(), {{"path", path.string()}});
  f << text;
  f.close();
  if (!f) throw Error(ErrorKind::IoFailure, "write failed for " + path.string(), {{"path", path.string()}});
}

std::vector<std::filesystem::path> emit_report(const RunReport& rep, const std::filesystem::path& dir,
                                               const std::set<ReportFormat>& formats)
{
  // serialize everything first so a non-finite value leaves no partial output
  std::vector<std::pair<std::filesystem::path, std::string>> files;
  if (formats.count(ReportFormat::Csv)) {
    files.emplace_back(dir / "energy.csv", energy_csv(rep.energy));
    files.emplace_back(dir / "iterations.csv", iterations_csv(rep.iterations));
  }
  if (formats.count(ReportFormat::Json)) files.emplace_back(dir / "summary.json", canonical_dump(summary_json(rep)));
  if (formats.count(ReportFormat::Svg)) {
    PlotSeries E{"E", {}, {}}, D{"D", {}, {}}, ratio{"ratio", {}, {}};
    for (const auto& s : rep.energy.samples) {
      E.x.push_back(s.t);
      E.y.push_back(s.E);
      D.x.push_back(s.t);
      D.y.push_back(s.D);
    }
    for (const auto& r : rep.iterations) {
      ratio.x.push_back(r.iter);
      ratio.y.push_back(r.ratio);
    }
    files.emplace_back(dir / "plots" / "energy.svg", line_plot_svg("energy E(t)", "t", {E}));
    files.emplace_back(dir / "plots" / "dissipation.svg", line_plot_svg("dissipation D(t)", "t", {D}));
    files.emplace_back(dir / "plots" / "ratios.svg", line_plot_svg("contraction ratio", "iteration", {ratio}, true));
  }
  std::vector<std::filesystem::path> out;
  for (const auto& [p, text] : files) {
    write_text_file(p, text);
    out.push_back(p);
  }
  return out;
}

} // namespace contactline
