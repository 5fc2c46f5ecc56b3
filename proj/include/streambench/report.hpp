#pragma once

#include <filesystem>

#include "streambench/streaming.hpp"

namespace streambench {

/// CSV with header [k, sAP, sAP50, sAP75, sAPs, sAPm, sAPl], one data row
/// per step horizon, aggregate numbers. RFC-4180, not-applicable as "nan".
void write_report_csv(const KStepReport& report,
                      const std::filesystem::path& path);

/// Full report (aggregate + per-sequence) with round-trip fidelity.
void write_report_json(const KStepReport& report,
                       const std::filesystem::path& path);
KStepReport load_report_json(const std::filesystem::path& path);

/// SVG 1.1 line plot of aggregate sAP versus k.
void write_report_svg(const KStepReport& report,
                      const std::filesystem::path& path);

/// Dispatches on format name: "csv", "json" or "svg".
void write_report(const KStepReport& report, const std::string& format,
                  const std::filesystem::path& path);

/// Combined SVG with one labeled sAP-vs-k series per report.
void write_multi_svg(
    const std::vector<std::pair<std::string, const KStepReport*>>& series,
    const std::filesystem::path& path);

}  // namespace streambench
