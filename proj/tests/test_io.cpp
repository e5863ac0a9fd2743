#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stablegen/io.hpp"
#include "stablegen/simulate.hpp"

using namespace stablegen;

TEST_CASE("mechanism json round trip") {
  const auto mech = StableMechanism::sub_critical(1.25, 0.5, 1.75);
  const StableMechanism back = mechanism_from_json(mechanism_to_json(mech));
  CHECK(back.alpha == mech.alpha);
  CHECK(back.gamma == mech.gamma);
  CHECK(back.b == mech.b);
  CHECK(back.regime == mech.regime);

  const auto crit = StableMechanism::critical(2.0, 1.5);
  const StableMechanism crit_back = mechanism_from_json(mechanism_to_json(crit));
  CHECK(crit_back.regime == Regime::Critical);
  CHECK(crit_back.alpha == 0.0);

  nlohmann::json bad = mechanism_to_json(mech);
  bad["regime"] = "weird";
  CHECK_THROWS_AS(mechanism_from_json(bad), std::invalid_argument);
}

TEST_CASE("path json round trip") {
  // randomized paths survive the serialization boundary bit for bit
  const auto mech = StableMechanism::sub_critical(1.0, 1.0, 1.5);
  Simulator sim(mech);
  for (std::uint64_t stream = 0; stream < 20; ++stream) {
    Rng rng(314, stream);
    const JumpPath path = sim.gwi(1.5, rng);
    const JumpPath back = path_from_json(path_to_json(path));
    CHECK(back.times == path.times);
    CHECK(back.states == path.states);
    CHECK(back.origin == path.origin);
    CHECK(back.truncated == path.truncated);
  }
}

TEST_CASE("origin names") {
  for (PathOrigin origin : {PathOrigin::GwiClock, PathOrigin::AncestralCalendar,
                            PathOrigin::CriticalCalendar}) {
    CHECK(origin_from_name(origin_name(origin)) == origin);
  }
  CHECK_THROWS_AS(origin_from_name("elsewhere"), std::invalid_argument);
}

TEST_CASE("csv serialization") {
  JumpPath path;
  path.times = {-1.5, -0.25};
  path.states = {1, 3};
  CHECK(path_to_csv(path) == "-1.5,1\n-0.25,3\n");
}

TEST_CASE("report and metadata blocks") {
  const auto mech = StableMechanism::sub_critical(1.0, 1.0, 2.0);
  const nlohmann::json report = test_report_json("chi-square", 12.5, 9, 0.19, 1000, 7);
  CHECK(report.at("test") == "chi-square");
  CHECK(report.at("dof") == 9);
  CHECK(report.at("pValue") == doctest::Approx(0.19));
  const nlohmann::json meta = metadata_json(mech, 7, "stablegen simulate gwi");
  CHECK(meta.contains("toolVersion"));
  CHECK(meta.contains("mechanism"));
  CHECK(meta.contains("seed"));
  CHECK(meta.contains("commandLine"));
  const std::string header = metadata_csv_header(mech, 7, "stablegen rates");
  CHECK(header.find("# seed: 7") != std::string::npos);
  CHECK(header.find("# toolVersion:") != std::string::npos);
}
