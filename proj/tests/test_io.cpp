#include "slrt/io.hpp"

#include "slrt/svg.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace slrt;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content = "") {
        path = std::string("slrt_io_test_") + name;
        if (!content.empty()) {
            std::ofstream out(path);
            out << content;
        }
    }
    ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("dataset CSV reading") {
    const TempFile f("data.csv", "1.5,2\n-3,4.25\n0,0\n");
    const Dataset d = read_dataset_csv(f.path);
    CHECK(d.n() == 3);
    CHECK(d.d() == 2);
    CHECK(d.rows()(1, 1) == 4.25);

    const TempFile h("hdr.csv", "x,y\n1,2\n3,4\n");
    const Dataset dh = read_dataset_csv(h.path, true);
    CHECK(dh.n() == 2);

    const TempFile ragged("ragged.csv", "1,2\n3\n");
    CHECK_THROWS_AS(read_dataset_csv(ragged.path), std::runtime_error);
    const TempFile junk("junk.csv", "1,two\n");
    CHECK_THROWS_AS(read_dataset_csv(junk.path), std::runtime_error);
    CHECK_THROWS_AS(read_dataset_csv("does_not_exist.csv"), std::runtime_error);
}

TEST_CASE("free coordinate parsing") {
    CHECK(parse_free_coords("none", 50).empty());
    CHECK(parse_free_coords("", 50).empty());

    const auto range = parse_free_coords("1..45", 50);
    REQUIRE(range.size() == 45);
    CHECK(range.front() == 0);
    CHECK(range.back() == 44);

    const auto mixed = parse_free_coords("2,5..7,9", 10);
    const std::vector<Eigen::Index> expect = {1, 4, 5, 6, 8};
    CHECK(mixed == expect);

    CHECK_THROWS_AS(parse_free_coords("0", 5), std::runtime_error);
    CHECK_THROWS_AS(parse_free_coords("6", 5), std::runtime_error);
    CHECK_THROWS_AS(parse_free_coords("3..2", 5), std::runtime_error);
    CHECK_THROWS_AS(parse_free_coords("x", 5), std::runtime_error);
}

TEST_CASE("grid parsing expands start:stop:step inclusively") {
    const auto g = parse_grid("0.1:0.9:0.05");
    CHECK(g.size() == 17);
    CHECK(g.front() == 0.1);
    CHECK(g.back() == 0.9);
    CHECK(g[1] == 0.15);  // snapped to the decimal value

    const auto h = parse_grid("0:0.5:0.1");
    CHECK(h.size() == 6);
    CHECK(h.back() == 0.5);

    CHECK(parse_grid("0.4") == std::vector<double>{0.4});
    CHECK(parse_grid("0.3,0.7") == std::vector<double>({0.3, 0.7}));

    CHECK_THROWS_AS(parse_grid("1:0:0.1"), std::runtime_error);
    CHECK_THROWS_AS(parse_grid("0:1:0"), std::runtime_error);
    CHECK_THROWS_AS(parse_grid("0:1"), std::runtime_error);
    CHECK_THROWS_AS(parse_grid(""), std::runtime_error);
}

TEST_CASE("hypothesis JSON round trip") {
    const TempFile f("hyp.json", R"({"offset": [0, 0, 0],
                                     "basis": [[1, 0, 0], [0, 1, 0]]})");
    const LinearHypothesis h = read_hypothesis_json(f.path);
    CHECK(h.dim() == 3);
    CHECK(h.q() == 2);

    const TempFile point("point.json", R"({"offset": [1.5], "basis": []})");
    const LinearHypothesis hp = read_hypothesis_json(point.path);
    CHECK(hp.q() == 0);
    CHECK(hp.offset()[0] == 1.5);

    const TempFile bad("bad.json", R"({"offset": [0, 0], "basis": [[1, 1]]})");
    CHECK_THROWS(read_hypothesis_json(bad.path));
    const TempFile missing("missing.json", R"({"offset": [0]})");
    CHECK_THROWS_AS(read_hypothesis_json(missing.path), std::runtime_error);
}

TEST_CASE("cell CSV carries the fixed schema") {
    SimCell cell;
    cell.kind = "size";
    cell.spec.n = 100;
    cell.spec.d = 50;
    cell.spec.q = 45;
    cell.spec.delta = 0.0;
    cell.spec.gamma = 0.15;
    cell.spec.alpha = 0.05;
    cell.spec.reps = 10000;
    cell.spec.seed = 7;
    cell.reject_rate = 0.0123;
    cell.std_error = 0.0011;

    const std::string csv = cells_to_csv({cell});
    std::istringstream is(csv);
    std::string comment, header, row;
    std::getline(is, comment);
    std::getline(is, header);
    std::getline(is, row);
    CHECK(comment.rfind("# gamma", 0) == 0);
    CHECK(header == "kind,n,d,q,delta,gamma,alpha,reps,seed,statistic,reject_rate,stderr");
    CHECK(row == "size,100,50,45,0,0.15,0.05,10000,7,plain,0.0123,0.0011");
}

TEST_CASE("format_double round-trips") {
    for (const double v : {0.1, 0.15, 1.0 / 3.0, 3.0, 0.05, 2.9957322735539909, 1e-300}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(3.0) == "3");
    CHECK(format_double(0.15) == "0.15");
}

TEST_CASE("atomic writes leave no temp file") {
    const TempFile f("atomic.txt");
    write_file_atomic(f.path, "hello\n");
    CHECK(slurp(f.path) == "hello\n");
    std::ifstream tmp(f.path + ".tmp");
    CHECK_FALSE(tmp.good());

    CHECK_THROWS_AS(write_file_atomic("no_such_dir/x.txt", "y"), std::runtime_error);
    CHECK_THROWS_AS(ensure_writable("no_such_dir/x.txt"), std::runtime_error);
    ensure_writable(f.path);  // no throw
}

TEST_CASE("SVG renders axes, series and error bars") {
    SvgSeries s;
    s.label = "plain";
    s.x = {0.1, 0.2, 0.3};
    s.y = {0.0, 0.4, 0.9};
    s.se = {0.01, 0.02, 0.01};
    const std::string svg = render_line_plot("Power vs delta", "delta", "rejection rate", {s});

    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("Power vs delta") != std::string::npos);
    CHECK(svg.find("rejection rate") != std::string::npos);
    // three error bars, each with a spine and two caps
    std::size_t count = 0, pos = 0;
    while ((pos = svg.find("<line", pos)) != std::string::npos) {
        ++count;
        ++pos;
    }
    CHECK(count >= 2 + 9);  // axes plus error bar segments and ticks

    CHECK_THROWS_AS(render_line_plot("t", "x", "y", {}), std::invalid_argument);
}
