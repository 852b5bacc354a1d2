#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pumpscan/csvio.hpp"
#include "support.hpp"

using namespace pumpscan;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("pumpscan_csv_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RankedCandidate candidate(const std::string& symbol, double score, int rank) {
    RankedCandidate c;
    c.symbol = symbol;
    c.score = score;
    c.normalized = 1.0;
    c.rank = rank;
    c.z.symbol = symbol;
    return c;
}

}  // namespace

TEST_CASE("empty ranking produces a header-only file and returns 0") {
    TempDir dir;
    const auto path = dir.path / "ranking.csv";
    CHECK(persist_rankings({}, path) == 0);
    const std::string content = slurp(path);
    CHECK(content.rfind("rank,symbol,score,z_bid_ask_spread,", 0) == 0);
    CHECK(std::count(content.begin(), content.end(), '\n') == 1);
}

TEST_CASE("51 candidates write 51 data rows") {
    TempDir dir;
    std::vector<RankedCandidate> ranked;
    for (int i = 0; i < 51; ++i) {
        ranked.push_back(candidate("SYM" + std::to_string(i), 51.0 - i, i + 1));
    }
    const auto path = dir.path / "ranking.csv";
    CHECK(persist_rankings(ranked, path) == 51);
    CHECK(std::count_if(slurp(path).begin(), slurp(path).end(),
                        [](char c) { return c == '\n'; }) == 52);
}

TEST_CASE("re-running persist_rankings is byte-identical") {
    TempDir dir;
    std::vector<RankedCandidate> ranked;
    RankedCandidate a = candidate("AAA", 2.5, 1);
    a.z.set(MetricName::Vwap, 1.25);
    a.z.set(MetricName::TradeCount, -0.5);
    ranked.push_back(a);
    ranked.push_back(candidate("BBB", -1.0, 2));

    const auto p1 = dir.path / "r1.csv";
    const auto p2 = dir.path / "r2.csv";
    persist_rankings(ranked, p1);
    persist_rankings(ranked, p2);
    const std::string c1 = slurp(p1);
    CHECK(c1 == slurp(p2));
    // absent z columns render as empty fields
    CHECK(c1.find("2,BBB,-1,,") != std::string::npos);
}

TEST_CASE("rankings must arrive sorted by rank") {
    std::vector<RankedCandidate> ranked;
    ranked.push_back(candidate("AAA", 1.0, 2));
    CHECK_THROWS_AS((void)render_rankings_csv(ranked), std::invalid_argument);
}

TEST_CASE("coin csv round-trips including quoting") {
    TempDir dir;
    std::vector<CoinMetadata> coins;
    coins.push_back(CoinMetadata{"TOKKI", "CRYPTOKKI", 2'700'000.0, TokenStandard::Erc20});
    coins.push_back(CoinMetadata{"NAR", "Narwhalswap, the pool", 0.0, TokenStandard::Bep20});
    coins.push_back(CoinMetadata{"XQ\"Z", "odd \"name\"", 12.5, std::nullopt});
    const auto path = dir.path / "coins.csv";
    write_file_atomic(path, render_coin_csv(coins));
    const auto parsed = read_coin_csv(path);
    REQUIRE(parsed.size() == 3);
    CHECK(parsed[0] == coins[0]);
    CHECK(parsed[1] == coins[1]);
    CHECK(parsed[2] == coins[2]);
}

TEST_CASE("coin csv rejects malformed rows") {
    TempDir dir;
    const auto path = dir.path / "bad.csv";
    write_file_atomic(path, "symbol,name,market_cap_usd,token_standard\nAAA,Coin,-5,\n");
    try {
        read_coin_csv(path);
        FAIL("expected SchemaViolation");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::SchemaViolation);
    }

    write_file_atomic(path, "AAA,Coin,notanumber,\n");
    CHECK_THROWS_AS(read_coin_csv(path), Error);

    write_file_atomic(path, "AAA,Coin,5\n");
    CHECK_THROWS_AS(read_coin_csv(path), Error);
}

TEST_CASE("rejection report renders symbol,reason rows") {
    TempDir dir;
    const auto path = dir.path / "rejected.csv";
    CHECK(persist_rejections({{"BTC3L", "derivative_pattern"}, {"BIG", "mcap_out_of_range"}},
                             path) == 2);
    CHECK(slurp(path) ==
          "symbol,reason\nBTC3L,derivative_pattern\nBIG,mcap_out_of_range\n");
}

TEST_CASE("metrics csv rows align with the header") {
    std::string csv = metrics_csv_header();
    MetricVector v;
    v.symbol = "AAA";
    v.set(MetricName::Vwap, 10.5);
    append_metrics_csv_row(csv, 1'000, v);
    std::istringstream in(csv);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(std::count(header.begin(), header.end(), ',') ==
          std::count(row.begin(), row.end(), ','));
    CHECK(row.rfind("1000,AAA,", 0) == 0);
}

TEST_CASE("csv_split handles quoted fields") {
    const auto fields = csv_split(R"(plain,"with, comma","with ""quote""",)");
    REQUIRE(fields.size() == 4);
    CHECK(fields[0] == "plain");
    CHECK(fields[1] == "with, comma");
    CHECK(fields[2] == "with \"quote\"");
    CHECK(fields[3].empty());
}
