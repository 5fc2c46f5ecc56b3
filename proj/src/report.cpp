#include "streambench/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace streambench {

namespace {

using nlohmann::json;

/// Shortest round-trip decimal form; byte-stable across runs.
std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json ap_to_json(const APReport& ap) {
  auto field = [](double v) {
    return std::isnan(v) ? json(nullptr) : json(v);
  };
  json cats = json::object();
  for (const auto& [id, value] : ap.per_category) {
    cats[std::to_string(id)] = field(value);
  }
  return {{"ap", field(ap.ap)},
          {"ap50", field(ap.ap50)},
          {"ap75", field(ap.ap75)},
          {"ap_small", field(ap.ap_small)},
          {"ap_medium", field(ap.ap_medium)},
          {"ap_large", field(ap.ap_large)},
          {"per_category", std::move(cats)},
          {"true_positives", ap.true_positives},
          {"false_positives", ap.false_positives},
          {"false_negatives", ap.false_negatives}};
}

APReport ap_from_json(const json& obj) {
  auto field = [&](const char* key) {
    const json& v = obj.at(key);
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                       : v.get<double>();
  };
  APReport ap;
  ap.ap = field("ap");
  ap.ap50 = field("ap50");
  ap.ap75 = field("ap75");
  ap.ap_small = field("ap_small");
  ap.ap_medium = field("ap_medium");
  ap.ap_large = field("ap_large");
  for (const auto& [key, value] : obj.at("per_category").items()) {
    ap.per_category[std::stoi(key)] =
        value.is_null() ? std::numeric_limits<double>::quiet_NaN()
                        : value.get<double>();
  }
  ap.true_positives = obj.at("true_positives").get<long>();
  ap.false_positives = obj.at("false_positives").get<long>();
  ap.false_negatives = obj.at("false_negatives").get<long>();
  return ap;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path.string() + "' for write");
  return out;
}

}  // namespace

void write_report_csv(const KStepReport& report,
                      const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "k,sAP,sAP50,sAP75,sAPs,sAPm,sAPl\r\n";
  for (const auto& [k, ap] : report.aggregate) {
    out << k << ',' << format_double(ap.ap) << ',' << format_double(ap.ap50)
        << ',' << format_double(ap.ap75) << ',' << format_double(ap.ap_small)
        << ',' << format_double(ap.ap_medium) << ','
        << format_double(ap.ap_large) << "\r\n";
  }
}

void write_report_json(const KStepReport& report,
                       const std::filesystem::path& path) {
  json aggregate = json::object();
  for (const auto& [k, ap] : report.aggregate) {
    aggregate[std::to_string(k)] = ap_to_json(ap);
  }
  json per_sequence = json::object();
  for (const auto& [sequence, table] : report.per_sequence) {
    json seq = json::object();
    for (const auto& [k, ap] : table) {
      seq[std::to_string(k)] = ap_to_json(ap);
    }
    per_sequence[sequence] = std::move(seq);
  }
  const json root = {{"max_k", report.max_k},
                     {"aggregate", std::move(aggregate)},
                     {"per_sequence", std::move(per_sequence)}};
  auto out = open_out(path);
  out << root.dump(2) << '\n';
}

KStepReport load_report_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
  KStepReport report;
  report.max_k = root.at("max_k").get<int>();
  for (const auto& [key, value] : root.at("aggregate").items()) {
    report.aggregate[std::stoi(key)] = ap_from_json(value);
  }
  for (const auto& [sequence, table] : root.at("per_sequence").items()) {
    for (const auto& [key, value] : table.items()) {
      report.per_sequence[sequence][std::stoi(key)] = ap_from_json(value);
    }
  }
  return report;
}

void write_report_svg(const KStepReport& report,
                      const std::filesystem::path& path) {
  const int width = 480, height = 320;
  const int margin = 48;
  const int plot_w = width - 2 * margin;
  const int plot_h = height - 2 * margin;
  const int max_k = std::max(report.max_k, 1);

  auto x_of = [&](int k) {
    return margin + (max_k == 1
                         ? plot_w / 2.0
                         : plot_w * (k - 1) / static_cast<double>(max_k - 1));
  };
  auto y_of = [&](double sap) { return margin + plot_h * (1.0 - sap); };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      << "width=\"" << width << "\" height=\"" << height << "\" "
      << "viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "  <rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  // axes
  out << "  <line x1=\"" << margin << "\" y1=\"" << margin + plot_h
      << "\" x2=\"" << margin + plot_w << "\" y2=\"" << margin + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\""
      << margin << "\" y2=\"" << margin + plot_h << "\" stroke=\"black\"/>\n";
  out << "  <text x=\"" << width / 2 << "\" y=\"" << height - 8
      << "\" font-size=\"12\" text-anchor=\"middle\">k</text>\n";
  out << "  <text x=\"14\" y=\"" << height / 2
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "14 "
      << height / 2 << ")\">sAP</text>\n";
  for (int k = 1; k <= max_k; ++k) {
    out << "  <text x=\"" << format_double(x_of(k)) << "\" y=\""
        << margin + plot_h + 16 << "\" font-size=\"10\" "
        << "text-anchor=\"middle\">" << k << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = i * 0.25;
    out << "  <text x=\"" << margin - 6 << "\" y=\""
        << format_double(y_of(v) + 3) << "\" font-size=\"10\" "
        << "text-anchor=\"end\">" << format_double(v) << "</text>\n";
  }

  std::string points;
  for (const auto& [k, ap] : report.aggregate) {
    if (std::isnan(ap.ap)) continue;
    if (!points.empty()) points += ' ';
    points += format_double(x_of(k)) + "," + format_double(y_of(ap.ap));
  }
  if (!points.empty()) {
    out << "  <polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" "
        << "points=\"" << points << "\"/>\n";
    for (const auto& [k, ap] : report.aggregate) {
      if (std::isnan(ap.ap)) continue;
      out << "  <circle cx=\"" << format_double(x_of(k)) << "\" cy=\""
          << format_double(y_of(ap.ap)) << "\" r=\"3\" fill=\"#1f6fb2\"/>\n";
    }
  }
  out << "</svg>\n";
}

void write_report(const KStepReport& report, const std::string& format,
                  const std::filesystem::path& path) {
  if (format == "csv") {
    write_report_csv(report, path);
  } else if (format == "json") {
    write_report_json(report, path);
  } else if (format == "svg") {
    write_report_svg(report, path);
  } else {
    throw ConfigError("unknown report format '" + format + "'");
  }
}

void write_multi_svg(
    const std::vector<std::pair<std::string, const KStepReport*>>& series,
    const std::filesystem::path& path) {
  static const char* kPalette[] = {"#1f6fb2", "#c23b22", "#2c8a4b",
                                   "#8a2ca0", "#b28a1f", "#1fb2a6"};
  const int width = 560, height = 360;
  const int margin = 48;
  const int legend_w = 120;
  const int plot_w = width - 2 * margin - legend_w;
  const int plot_h = height - 2 * margin;
  int max_k = 1;
  for (const auto& [label, report] : series) {
    max_k = std::max(max_k, report->max_k);
  }
  auto x_of = [&](int k) {
    return margin + (max_k == 1
                         ? plot_w / 2.0
                         : plot_w * (k - 1) / static_cast<double>(max_k - 1));
  };
  auto y_of = [&](double sap) { return margin + plot_h * (1.0 - sap); };

  auto out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      << "width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
      << width << ' ' << height << "\">\n";
  out << "  <rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "  <line x1=\"" << margin << "\" y1=\"" << margin + plot_h
      << "\" x2=\"" << margin + plot_w << "\" y2=\"" << margin + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\""
      << margin << "\" y2=\"" << margin + plot_h << "\" stroke=\"black\"/>\n";
  for (int k = 1; k <= max_k; ++k) {
    out << "  <text x=\"" << format_double(x_of(k)) << "\" y=\""
        << margin + plot_h + 16
        << "\" font-size=\"10\" text-anchor=\"middle\">" << k << "</text>\n";
  }
  int index = 0;
  for (const auto& [label, report] : series) {
    const char* color = kPalette[index % 6];
    std::string points;
    for (const auto& [k, ap] : report->aggregate) {
      if (std::isnan(ap.ap)) continue;
      if (!points.empty()) points += ' ';
      points += format_double(x_of(k)) + "," + format_double(y_of(ap.ap));
    }
    if (!points.empty()) {
      out << "  <polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
    }
    const int ly = margin + 14 * index;
    out << "  <line x1=\"" << margin + plot_w + 12 << "\" y1=\"" << ly
        << "\" x2=\"" << margin + plot_w + 30 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "  <text x=\"" << margin + plot_w + 34 << "\" y=\"" << ly + 3
        << "\" font-size=\"10\">" << label << "</text>\n";
    ++index;
  }
  out << "</svg>\n";
}

}  // namespace streambench
