#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rwlab/error.hpp"
#include "rwlab/verify.hpp"

namespace rwlab {

/// Writes to a sibling temp file and renames it into place, so a failed run
/// never leaves a partial file behind.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) fail(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
        os << content;
        os.flush();
        if (!os) {
            os.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            fail(ErrorCode::Io, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        fail(ErrorCode::Io, "cannot rename into " + path.string());
    }
}

inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline constexpr const char* kReportHeader = "theorem,law,n,x,y,exact,rhs,rel_err";

/// Report CSV. Excluded cells are left out; an empty report is header only.
inline std::string report_csv(const ComparisonReport& r) {
    std::ostringstream os;
    os << kReportHeader << '\n';
    for (const auto& c : r.cells) {
        if (c.excluded) continue;
        os << to_string(r.theorem) << ',' << r.law << ',' << c.n << ',' << c.x << ',' << c.y << ','
           << format_g17(c.exact) << ',' << format_g17(c.rhs) << ',' << format_g17(c.rel_err)
           << '\n';
    }
    return os.str();
}

inline std::string constants_block(const WalkConstants& c) {
    std::ostringstream os;
    char buf[160];
    auto line = [&](const char* name, const EstimatedValue& v) {
        std::snprintf(buf, sizeof buf, "  %-10s %.12g  (+/- %.3g, %s)\n", name, v.value, v.error,
                      v.method.c_str());
        os << buf;
    };
    os << "constants:\n";
    line("C+", c.C_plus);
    line("C+ (H)", c.C_plus_entrance);
    line("C-", c.C_minus);
    line("C- (H)", c.C_minus_entrance);
    line("C*", c.C_star);
    line("C* (alt)", c.C_star_alt);
    std::snprintf(buf, sizeof buf, "  %-10s %.12g  (exact from moments)\n", "lambda3", c.lambda3);
    os << buf;
    return os.str();
}

/// Structured text summary: header, per-coordinate trends, notes and the
/// constants block when the constants are known.
inline std::string report_summary(const ComparisonReport& r, const WalkConstants* c = nullptr) {
    std::ostringstream os;
    os << "theorem: " << to_string(r.theorem) << '\n';
    os << "law: " << r.law << '\n';
    char buf[200];
    std::snprintf(buf, sizeof buf, "tolerance: %g (calibration choice, not a stated constant)\n",
                  r.tolerance);
    os << buf;
    std::size_t used = 0, excluded = 0;
    for (const auto& cell : r.cells) (cell.excluded ? excluded : used)++;
    os << "cells: " << used << " compared, " << excluded << " excluded\n";
    os << "trends:\n";
    for (const auto& t : r.trends) {
        os << "  " << t.label() << " errors";
        for (std::size_t i = 0; i < t.err.size(); ++i) {
            std::snprintf(buf, sizeof buf, " n=%lld:%.6g", t.n[i], t.err[i]);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, " slope=%.4f decreasing=%s\n", t.slope,
                      t.decreasing ? "yes" : "no");
        os << buf;
    }
    for (const auto& n : r.notes) os << "note: " << n << '\n';
    os << "result: " << (r.passed() ? "PASS" : "FAIL") << '\n';
    if (c) os << constants_block(*c);
    return os.str();
}

inline void emit_report(const ComparisonReport& r, const std::filesystem::path& path) {
    atomic_write(path, report_csv(r));
}

}  // namespace rwlab
