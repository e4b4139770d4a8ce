#include <doctest.h>

#include <string>
#include <vector>

#include "codesurvey/chart.hpp"
#include "support.hpp"

using namespace codesurvey;

namespace {

size_t count_occurrences(const std::string& text, const std::string& needle) {
    size_t n = 0;
    for (size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++n;
    return n;
}

TimelineSeries series(const std::string& label, int start, std::vector<double> values) {
    TimelineSeries s;
    s.label = label;
    s.start_month = start;
    s.values = std::move(values);
    return s;
}

void check_svg_shell(const std::string& svg, const std::string& title) {
    CHECK(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0) == 0);
    CHECK(svg.find("<title>" + title + "</title>") != std::string::npos);
    CHECK(count_occurrences(svg, "<svg ") == 1);
    CHECK(count_occurrences(svg, "</svg>") == 1);
    CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
}

}  // namespace

TEST_CASE("pie_angles normalizes shares to a closed circle") {
    auto angles = chart::pie_angles({0.5, 0.25, 0.25});
    REQUIRE(angles.size() == 3);
    CHECK(angles[0] == doctest::Approx(180.0).epsilon(1e-12));
    CHECK(angles[1] == doctest::Approx(90.0).epsilon(1e-12));
    CHECK(angles[2] == doctest::Approx(90.0).epsilon(1e-12));

    // Shares that do not sum to 1 are normalized over their own sum.
    angles = chart::pie_angles({2.0, 6.0});
    CHECK(angles[0] == doctest::Approx(90.0).epsilon(1e-12));
    CHECK(angles[1] == doctest::Approx(270.0).epsilon(1e-12));

    double total = 0;
    for (double a : chart::pie_angles({0.1, 0.7, 0.05, 0.15})) total += a;
    CHECK(total == doctest::Approx(360.0).epsilon(1e-12));

    CHECK(chart::pie_angles({0.0, 0.0}) == std::vector<double>{0.0, 0.0});
    CHECK(chart::pie_angles({}).empty());
    CHECK(chart::pie_angles({0.42}) == std::vector<double>{360.0});
}

TEST_CASE("render_line draws one polyline per series with a legend") {
    std::vector<TimelineSeries> input = {
        series("Bug fix", 2020 * 12, {1, 4, 2, 5}),
        series("New <feature> & \"more\"", 2020 * 12 + 1, {0, 2, 1}),
    };
    std::string svg = chart::render_line(input, "Commits per month");
    check_svg_shell(svg, "Commits per month");
    CHECK(count_occurrences(svg, "<polyline ") == 2);
    CHECK(svg.find("Bug fix") != std::string::npos);
    CHECK(svg.find("New &lt;feature&gt; &amp; &quot;more&quot;") != std::string::npos);
    CHECK(svg.find("2020-01") != std::string::npos);  // month tick labels
    CHECK(svg.find("<circle") == std::string::npos);  // markers only for single points

    CHECK(chart::render_line(input, "Commits per month") == svg);  // deterministic

    std::string single = chart::render_line({series("only", 2020 * 12, {3})}, "One month");
    CHECK(count_occurrences(single, "<circle") == 1);

    CHECK_THROWS_WITH_AS(chart::render_line({}, "t"), doctest::Contains("render_line: no series"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(chart::render_line({series("empty", 0, {})}, "t"),
                         doctest::Contains("render_line: empty series empty"),
                         std::runtime_error);
}

TEST_CASE("render_pie emits slices for positive shares and a full legend") {
    std::vector<DistributionEntry> entries = {
        {"a", "Bug fix", 30, 0.5},
        {"b", "New feature", 18, 0.3},
        {"c", "Cleanup & docs", 12, 0.2},
    };
    std::string svg = chart::render_pie(entries, "Distribution");
    check_svg_shell(svg, "Distribution");
    CHECK(count_occurrences(svg, "<path ") == 3);
    CHECK(svg.find("Bug fix (30, 50.0%)") != std::string::npos);
    CHECK(svg.find("Cleanup &amp; docs (12, 20.0%)") != std::string::npos);

    // A single full slice renders as a circle, not a degenerate arc.
    std::string full = chart::render_pie({{"a", "Everything", 9, 1.0}}, "All");
    CHECK(count_occurrences(full, "<path ") == 0);
    CHECK(count_occurrences(full, "<circle ") == 1);
    CHECK(full.find("Everything (9, 100.0%)") != std::string::npos);

    // Zero-share entries keep their legend line but draw nothing.
    std::string with_zero =
        chart::render_pie({{"a", "Used", 5, 1.0}, {"b", "Unused", 0, 0.0}}, "Zeroes");
    CHECK(count_occurrences(with_zero, "<circle ") == 1);
    CHECK(count_occurrences(with_zero, "<path ") == 0);
    CHECK(with_zero.find("Unused (0, 0.0%)") != std::string::npos);

    CHECK_THROWS_WITH_AS(chart::render_pie({}, "t"), doctest::Contains("render_pie: no slices"),
                         std::runtime_error);
}

TEST_CASE("render_bar emits one labeled bar per entry") {
    std::vector<RankedCount> ranking = {
        {"kernel/bpf/verifier.c", 40, 0.4},
        {"kernel/bpf/syscall.c", 25, 0.25},
        {"net/core/filter.c", 10, 0.1},
    };
    std::string svg = chart::render_bar(ranking, "Top buggy files");
    check_svg_shell(svg, "Top buggy files");
    // One background rect plus one bar per ranked entry.
    CHECK(count_occurrences(svg, "<rect ") == 4);
    CHECK(svg.find("kernel/bpf/verifier.c") != std::string::npos);
    CHECK(svg.find("40 (40.0%)") != std::string::npos);
    CHECK(svg.find("10 (10.0%)") != std::string::npos);
    CHECK(chart::render_bar(ranking, "Top buggy files") == svg);

    CHECK_THROWS_WITH_AS(chart::render_bar({}, "t"), doctest::Contains("render_bar: no bars"),
                         std::runtime_error);
}

TEST_CASE("render_heatmap paints every cell and labels nonzero values") {
    FeatureComponentMatrix m;
    m.feature_keywords = {"xdp", "btf"};
    m.components = {"eBPF verifier", "eBPF maps", "libbpf library"};
    m.cells = {{3, 0, 1}, {0, 2, 0}};

    std::string svg = chart::render_heatmap(m, "Features vs components");
    check_svg_shell(svg, "Features vs components");
    // Background rect plus one rect per cell.
    CHECK(count_occurrences(svg, "<rect ") == 1 + 2 * 3);
    CHECK(svg.find("xdp") != std::string::npos);
    CHECK(svg.find("eBPF maps") != std::string::npos);
    // Exactly the three nonzero values get number labels: 3, 1 and 2.
    CHECK(count_occurrences(svg, "font-size=\"11\" fill=") == 3);

    FeatureComponentMatrix empty;
    CHECK_THROWS_WITH_AS(chart::render_heatmap(empty, "t"),
                         doctest::Contains("render_heatmap: empty matrix"), std::runtime_error);
    FeatureComponentMatrix no_components;
    no_components.feature_keywords = {"xdp"};
    CHECK_THROWS_AS(chart::render_heatmap(no_components, "t"), std::runtime_error);
}

TEST_CASE("write_svg writes bytes and reports unwritable paths") {
    testsupport::TempDir dir;
    std::string path = dir.file("chart.svg");
    std::string svg = chart::render_bar({{"k", 1, 1.0}}, "t");
    chart::write_svg(path, svg);
    CHECK(testsupport::read_file(path) == svg);

    CHECK_THROWS_WITH_AS(chart::write_svg(dir.file("no/such/dir/x.svg"), svg),
                         doctest::Contains("cannot write"), std::runtime_error);
}
