#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rwlab/report_io.hpp"
#include "rwlab/standard_laws.hpp"

using namespace rwlab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ComparisonReport small_report() {
    ComparisonReport r;
    r.theorem = TheoremId::T13;
    r.law = "l1";
    Cell c;
    c.n = 256;
    c.x = 4;
    c.y = 4;
    c.exact = 1.0 / 3.0;
    c.rhs = 0.3;
    c.rel_err = relative_error(c.exact, c.rhs);
    r.cells.push_back(c);
    Cell skipped = c;
    skipped.excluded = true;
    r.cells.push_back(skipped);
    return r;
}

}  // namespace

TEST(ReportCsv, EmptyIsHeaderOnly) {
    ComparisonReport r;
    EXPECT_EQ(report_csv(r), std::string(kReportHeader) + "\n");
}

TEST(ReportCsv, RowsAndExclusions) {
    const auto s = report_csv(small_report());
    EXPECT_EQ(s, std::string(kReportHeader) + "\nT13,l1,256,4,4,0.33333333333333331,0.29999999999999999,0.099999999999999978\n");
}

TEST(RelativeError, FloorGuard) {
    EXPECT_EQ(relative_error(0.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(relative_error(0.0, 1e-20), 1e-4);
    EXPECT_DOUBLE_EQ(ratio_error(2.0, 1.0), 1.0);
}

TEST(EmitReport, SameBytesTwice) {
    const auto dir = fs::temp_directory_path() / "rwlab_report_io";
    fs::create_directories(dir);
    emit_report(small_report(), dir / "a.csv");
    emit_report(small_report(), dir / "b.csv");
    EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
    EXPECT_FALSE(fs::exists(dir / "a.csv.tmp"));
    fs::remove_all(dir);
}

TEST(AtomicWrite, NoPartialFileOnError) {
    const auto bad = fs::temp_directory_path() / "rwlab_missing_dir" / "x.csv";
    try {
        atomic_write(bad, "data");
        ADD_FAILURE();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
    }
    EXPECT_FALSE(fs::exists(bad));
}

TEST(Summary, ConstantsBlock) {
    const auto ctx = build_context(laws::l1());
    const auto s = report_summary(small_report(), &ctx.constants);
    for (const char* key : {"constants:", "C+ ", "C- ", "C* ", "lambda3"}) EXPECT_NE(s.find(key), std::string::npos) << key;
    EXPECT_EQ(report_summary(small_report()).find("constants:"), std::string::npos);
}
