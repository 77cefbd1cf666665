#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sps/core.hpp"

using namespace sps;
namespace fs = std::filesystem;

namespace {

fs::path tmp_file(const char* name) {
    return fs::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("pulse schedule validation") {
    PulseSchedule s;
    s.t_w = 370e-9;
    s.t_s = 350e-9;
    s.t_r = 1.4e-6;
    s.t_p = 2.46e-6;
    s.gate_window = 1.4e-6;
    CHECK_NOTHROW(s.validate());
    CHECK(s.gate_start() == doctest::Approx(720e-9));
    CHECK(s.rep_rate() == doctest::Approx(1.0 / 2.46e-6));

    PulseSchedule bad = s;
    bad.t_p = 2.0e-6;  // t_w + t_s + t_r = 2.12 us > t_p
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = s;
    bad.gate_window = 3e-6;
    CHECK_THROWS_AS(bad.validate(), ValidationError);

    bad = s;
    bad.duty_cycle = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("physical parameter warnings and errors") {
    PhysicalParams p;
    p.gamma_ge = 2.0;
    p.gamma_gr = 1.0;
    p.gamma_cr = 0.5;
    CHECK(p.validate().empty());

    p.gamma_gr = 3.0;  // violates gamma_ge > gamma_gr
    CHECK(p.validate().size() == 1);

    p.gamma_ge = -1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);

    p = PhysicalParams{};
    p.n_collective = 0.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("optical path efficiency is the stage product") {
    OpticalPath path;
    CHECK(path_efficiency(path) == doctest::Approx(1.0));
    path.stages = {{"optics", 0.75}, {"aom", 0.79}, {"fiber", 0.75}};
    CHECK_NOTHROW(path.validate());
    CHECK(path_efficiency(path) == doctest::Approx(0.75 * 0.79 * 0.75));

    path.stages.emplace_back("bad", 1.5);
    CHECK_THROWS_AS(path.validate(), ValidationError);
}

TEST_CASE("detector and beamsplitter validation") {
    DetectorModel det;
    det.background_rate = {80.0, 100.0};
    det.efficiency = 0.67;
    CHECK_NOTHROW(det.validate());
    det.efficiency = 1.2;
    CHECK_THROWS_AS(det.validate(), ValidationError);

    BeamSplitterCoeffs bs;
    bs.p1H = bs.p1V = bs.p2H = bs.p2V = {0.7, 0.7};
    CHECK_NOTHROW(bs.validate());
    CHECK(bs.alpha() == doctest::Approx(3.14159265358979));

    bs.p1H = {0.9, 0.9};  // t^2 + r^2 = 1.62
    CHECK_THROWS_AS(bs.validate(), ValidationError);
}

TEST_CASE("sort_stream orders by timestamp then channel") {
    TimeTagStream s = {{1, 50}, {0, 10}, {1, 10}, {0, 50}, {0, 10}};
    sort_stream(s);
    CHECK(s == TimeTagStream{{0, 10}, {0, 10}, {1, 10}, {0, 50}, {1, 50}});
}

TEST_CASE("csv tag round trip") {
    const TimeTagStream tags = {{0, 0}, {1, 123456789}, {0, 987654321012345}};
    const auto path = tmp_file("tags_roundtrip.csv");
    write_tags_csv(path.string(), tags);
    CHECK(read_tags_csv(path.string()) == tags);
    CHECK(read_tags(path.string()) == tags);  // sniffing picks CSV
    fs::remove(path);
}

TEST_CASE("binary tag round trip and magic sniffing") {
    const TimeTagStream tags = {{1, 7}, {0, 0xffffffffffULL}};
    const auto path = tmp_file("tags_roundtrip.bin");
    write_tags_binary(path.string(), tags);
    CHECK(read_tags_binary(path.string()) == tags);
    CHECK(read_tags(path.string()) == tags);  // sniffing picks binary
    CHECK_THROWS_AS(read_tags_csv(path.string()), ParseError);
    fs::remove(path);
}

TEST_CASE("malformed tag files raise parse errors") {
    const auto path = tmp_file("tags_bad.csv");
    {
        std::ofstream out(path);
        out << "channel,timestamp_ns\n0,12\nnot a record\n";
    }
    CHECK_THROWS_AS(read_tags_csv(path.string()), ParseError);
    {
        std::ofstream out(path);
        out << "no header here\n";
    }
    CHECK_THROWS_AS(read_tags_csv(path.string()), ParseError);
    fs::remove(path);
    CHECK_THROWS_AS(read_tags_csv(path.string()), IoError);

    const auto bin = tmp_file("tags_bad.bin");
    {
        std::ofstream out(bin, std::ios::binary);
        out << "TTAG1";
        out.put(0);  // truncated record
    }
    CHECK_THROWS_AS(read_tags_binary(bin.string()), ParseError);
    fs::remove(bin);
}
