// Copyright 2026  The spoofeval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "spoofeval/http_service.hpp"
#include "spoofeval/service.hpp"
#include "support/temp_dir.hpp"

using namespace spoofeval;

namespace {

// Progress subset P1..P4, evaluation subset E1..E4 (two bonafide and two
// spoof trials each).
const char* kKeyText =
    "P1 LA LA-C1 - bonafide progress\n"
    "P2 LA LA-C1 - bonafide progress\n"
    "P3 LA LA-C1 A01 spoof progress\n"
    "P4 LA LA-C1 A01 spoof progress\n"
    "E1 LA LA-C2 - bonafide evaluation\n"
    "E2 LA LA-C2 - bonafide evaluation\n"
    "E3 LA LA-C2 A02 spoof evaluation\n"
    "E4 LA LA-C2 A02 spoof evaluation\n";

// Separable progress scores: EER 0, min t-DCF at the floor.
const char* kGoodProgress = "P1 2.0\nP2 1.5\nP3 -1.0\nP4 -2.0\n";
// One spoof trial above one bonafide trial: strictly worse metrics than
// kGoodProgress under every coefficient set.
const char* kWeakProgress = "P1 2.0\nP2 0.5\nP3 1.0\nP4 -2.0\n";
const char* kGoodEvaluation = "E1 2.0\nE2 1.5\nE3 -1.0\nE4 -2.0\n";

struct Fixture {
  testing_support::TempDir dir;
  std::shared_ptr<std::int64_t> now;
  ServiceConfig config;

  explicit Fixture(bool second_team_on_leaderboard = true) {
    dir.write("keys.txt", kKeyText);
    now = std::make_shared<std::int64_t>(
        parse_iso8601("2026-01-10T12:00:00Z"));
    nlohmann::json j;
    j["data_dir"] = dir.file("data");
    j["port"] = 18080;
    j["teams"] = nlohmann::json::array(
        {{{"token", "tok-alpha"}, {"alias", "alpha"}, {"leaderboard", true}},
         {{"token", "tok-beta"},
          {"alias", "beta"},
          {"leaderboard", second_team_on_leaderboard}},
         {{"token", "tok-gamma"}, {"alias", "gamma"}}});
    j["tasks"] = nlohmann::json::array(
        {{{"task", "LA"},
          {"key_file", dir.file("keys.txt")},
          {"phases",
           nlohmann::json::array(
               {{{"name", "progress"},
                 {"start", "2026-01-01T00:00:00Z"},
                 {"end", "2026-02-01T00:00:00Z"}},
                {{"name", "evaluation"},
                 {"start", "2026-02-01T00:00:00Z"},
                 {"end", "2026-03-01T00:00:00Z"}}})}}});
    config = parse_service_config(j.dump());
  }

  Clock clock() const {
    auto n = now;
    return [n] { return *n; };
  }

  void set_time(const char* iso) { *now = parse_iso8601(iso); }
  void advance(std::int64_t seconds) { *now += seconds; }
};

}  // namespace

// ---------------------------------------------------------------------------
// Time and digest utilities.

TEST_CASE("iso8601 round trip and validation") {
  CHECK(parse_iso8601("1970-01-01T00:00:00Z") == 0);
  CHECK(parse_iso8601("1970-01-02T00:00:00") == 86400);
  CHECK(format_iso8601(0) == "1970-01-01T00:00:00Z");
  const std::int64_t t = parse_iso8601("2026-08-22T07:30:59Z");
  CHECK(format_iso8601(t) == "2026-08-22T07:30:59Z");
  // Leap year: 2024-02-29 valid, 2026-02-29 not.
  CHECK_NOTHROW(parse_iso8601("2024-02-29T00:00:00Z"));
  CHECK_THROWS_AS(parse_iso8601("2026-02-29T00:00:00Z"), Error);
  CHECK_THROWS_AS(parse_iso8601("2026-13-01T00:00:00Z"), Error);
  CHECK_THROWS_AS(parse_iso8601("2026-00-10T00:00:00Z"), Error);
  CHECK_THROWS_AS(parse_iso8601("2026-01-32T00:00:00Z"), Error);
  CHECK_THROWS_AS(parse_iso8601("not a date"), Error);
  CHECK_THROWS_AS(parse_iso8601("2026-01-10T25:00:00Z"), Error);
}

TEST_CASE("utc day index") {
  CHECK(utc_day_index(0) == 0);
  CHECK(utc_day_index(86399) == 0);
  CHECK(utc_day_index(86400) == 1);
  const std::int64_t t = parse_iso8601("2026-01-10T23:59:59Z");
  CHECK(utc_day_index(t) == utc_day_index(parse_iso8601("2026-01-10T00:00:00Z")));
  CHECK(utc_day_index(t) + 1 == utc_day_index(t + 1));
  CHECK(format_utc_day(utc_day_index(t)) == "2026-01-10");
  CHECK(format_utc_day(0) == "1970-01-01");
}

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

// ---------------------------------------------------------------------------
// Configuration.

TEST_CASE("config defaults: quotas, subsets and coefficients") {
  Fixture fx;
  REQUIRE(fx.config.tasks.size() == 1);
  const auto& phases = fx.config.tasks[0].phases;
  REQUIRE(phases.size() == 2);

  CHECK(phases[0].name == "progress");
  REQUIRE(phases[0].daily_quota.has_value());
  CHECK(*phases[0].daily_quota == 3);
  CHECK_FALSE(phases[0].total_quota.has_value());
  CHECK(phases[0].trial_subset == TrialPhase::progress);
  REQUIRE(phases[0].coefficients.has_value());
  CHECK(phases[0].coefficients->c0 == 0.1588);  // LA progress set

  CHECK(phases[1].name == "evaluation");
  CHECK_FALSE(phases[1].daily_quota.has_value());
  REQUIRE(phases[1].total_quota.has_value());
  CHECK(*phases[1].total_quota == 1);
  CHECK(phases[1].trial_subset == TrialPhase::evaluation);
  REQUIRE(phases[1].coefficients.has_value());
  CHECK(phases[1].coefficients->c0 == 0.1847);  // LA evaluation set
}

TEST_CASE("config rejections") {
  auto base = [](const std::string& phases) {
    return std::string(R"({"teams":[{"token":"t","alias":"a"}],)") +
           R"("tasks":[{"task":"LA","key_file":"k.txt","phases":[)" + phases +
           "]}]}";
  };
  // Overlapping phases.
  CHECK_THROWS_AS(
      parse_service_config(base(
          R"({"name":"progress","start":"2026-01-01T00:00:00Z","end":"2026-02-01T00:00:00Z"},)"
          R"({"name":"evaluation","start":"2026-01-15T00:00:00Z","end":"2026-03-01T00:00:00Z"})")),
      Error);
  // Bad phase name.
  CHECK_THROWS_AS(
      parse_service_config(base(
          R"({"name":"warmup","start":"2026-01-01T00:00:00Z","end":"2026-02-01T00:00:00Z"})")),
      Error);
  // Start after end.
  CHECK_THROWS_AS(
      parse_service_config(base(
          R"({"name":"progress","start":"2026-02-01T00:00:00Z","end":"2026-01-01T00:00:00Z"})")),
      Error);
  // Hidden subset without explicit coefficients.
  CHECK_THROWS_AS(
      parse_service_config(base(
          R"({"name":"post_evaluation","start":"2026-03-01T00:00:00Z","end":"2026-04-01T00:00:00Z","trial_subset":"hidden"})")),
      Error);
  // Duplicate aliases.
  CHECK_THROWS_AS(
      parse_service_config(
          R"({"teams":[{"token":"t1","alias":"a"},{"token":"t2","alias":"a"}],"tasks":[]})"),
      Error);
  // Zero quota.
  CHECK_THROWS_AS(
      parse_service_config(base(
          R"({"name":"progress","start":"2026-01-01T00:00:00Z","end":"2026-02-01T00:00:00Z","daily_quota":0})")),
      Error);
}

TEST_CASE("environment overrides port and data dir") {
  ::setenv("SPOOFEVAL_PORT", "19999", 1);
  ::setenv("SPOOFEVAL_DATA_DIR", "/tmp/elsewhere", 1);
  const auto config = parse_service_config(
      R"({"port":1234,"data_dir":"here","teams":[{"token":"t","alias":"a"}],"tasks":[]})");
  ::unsetenv("SPOOFEVAL_PORT");
  ::unsetenv("SPOOFEVAL_DATA_DIR");
  CHECK(config.port == 19999);
  CHECK(config.data_dir == "/tmp/elsewhere");
}

// ---------------------------------------------------------------------------
// Submission flow.

TEST_CASE("scored submission carries both metrics at full fidelity") {
  Fixture fx;
  Platform platform(fx.config, fx.clock());
  const auto record = platform.submit("tok-alpha", Task::la, kGoodProgress);
  CHECK(record.id == "sub-000001");
  CHECK(record.team_alias == "alpha");
  CHECK(record.phase == "progress");
  CHECK(record.scored);
  CHECK(record.digest == sha256_hex(kGoodProgress));
  CHECK(record.received_at == parse_iso8601("2026-01-10T12:00:00Z"));
  REQUIRE(record.result.has_value());
  CHECK(record.result->eer == 0.0);
  REQUIRE(record.result->min_tdcf.has_value());
  // Separable: the normalized floor c0 / (c0 + min(c1, c2)) for LA progress.
  CHECK(*record.result->min_tdcf ==
        doctest::Approx(0.1588 / (0.1588 + 0.8412)).epsilon(1e-12));
}

TEST_CASE("unknown token and unknown task") {
  Fixture fx;
  Platform platform(fx.config, fx.clock());
  CHECK_THROWS_AS(platform.submit("nope", Task::la, kGoodProgress), Error);
  try {
    platform.submit("nope", Task::la, kGoodProgress);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::auth_error);
  }
  try {
    platform.submit("tok-alpha", Task::df, kGoodProgress);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_found);
  }
}

TEST_CASE("phase windows") {
  Fixture fx;
  Platform platform(fx.config, fx.clock());

  fx.set_time("2025-12-31T23:59:59Z");  // before progress opens
  CHECK_THROWS_AS(platform.submit("tok-alpha", Task::la, kGoodProgress), Error);

  fx.set_time("2026-01-01T00:00:00Z");  // inclusive start
  CHECK(platform.submit("tok-alpha", Task::la, kGoodProgress).scored);

  fx.set_time("2026-02-01T00:00:00Z");  // exclusive end of progress ->
                                        // evaluation phase, other subset
  const auto record =
      platform.submit("tok-alpha", Task::la, kGoodEvaluation);
  CHECK(record.phase == "evaluation");
  CHECK(record.scored);

  fx.set_time("2026-03-01T00:00:00Z");  // after everything
  try {
    platform.submit("tok-alpha", Task::la, kGoodProgress);
    FAIL("expected phase_closed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::phase_closed);
  }
}

TEST_CASE("malformed and misaligned submissions are recorded, not fatal") {
  Fixture fx;
  Platform platform(fx.config, fx.clock());

  const auto bad = platform.submit("tok-alpha", Task::la, "P1 not-a-number\n");
  CHECK_FALSE(bad.scored);
  CHECK(bad.reason == "MalformedLine");
  CHECK_FALSE(bad.result.has_value());

  const auto missing = platform.submit("tok-alpha", Task::la, "P1 1.0\n");
  CHECK_FALSE(missing.scored);
  CHECK(missing.reason == "MissingTrial");

  const auto extra = platform.submit(
      "tok-alpha", Task::la,
      std::string(kGoodProgress) + "X9 0.0\n");
  CHECK_FALSE(extra.scored);
  CHECK(extra.reason == "ExtraTrial");

  // Scoring the evaluation subset during the progress phase fails alignment.
  const auto wrong_subset =
      platform.submit("tok-alpha", Task::la, kGoodEvaluation);
  CHECK_FALSE(wrong_subset.scored);
}

TEST_CASE("daily quota counts only scored submissions and resets at the "
          "UTC day boundary") {
  Fixture fx;
  Platform platform(fx.config, fx.clock());

  // Rejections never consume quota.
  for (int i = 0; i < 5; ++i) {
    CHECK_FALSE(
        platform.submit("tok-alpha", Task::la, "garbage x\n").scored);
  }
  // Three scored submissions pass...
  for (int i = 0; i < 3; ++i) {
    CHECK(platform.submit("tok-alpha", Task::la, kGoodProgress).scored);
    fx.advance(60);
  }
  // ...the fourth of the same UTC day does not.
  try {
    platform.submit("tok-alpha", Task::la, kGoodProgress);
    FAIL("expected quota_exceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::quota_exceeded);
  }
  // Another team is unaffected.
  CHECK(platform.submit("tok-beta", Task::la, kGoodProgress).scored);

  // Next UTC day: quota resets.
  fx.set_time("2026-01-11T00:00:01Z");
  CHECK(platform.submit("tok-alpha", Task::la, kGoodProgress).scored);
}

TEST_CASE("evaluation quota is total, not daily") {
  Fixture fx;
  Platform platform(fx.config, fx.clock());
  fx.set_time("2026-02-03T10:00:00Z");
  CHECK(platform.submit("tok-alpha", Task::la, kGoodEvaluation).scored);
  fx.set_time("2026-02-10T10:00:00Z");  // a week later: still spent
  try {
    platform.submit("tok-alpha", Task::la, kGoodEvaluation);
    FAIL("expected quota_exceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::quota_exceeded);
  }
}

TEST_CASE("identical resubmissions count against quota") {
  Fixture fx;
  Platform platform(fx.config, fx.clock());
  for (int i = 0; i < 3; ++i) {
    CHECK(platform.submit("tok-alpha", Task::la, kGoodProgress).scored);
  }
  CHECK_THROWS_AS(platform.submit("tok-alpha", Task::la, kGoodProgress),
                  Error);
}

TEST_CASE("concurrent burst admits exactly the quota") {
  Fixture fx;
  Platform platform(fx.config, fx.clock());
  std::atomic<int> admitted{0}, refused{0}, other{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 10; ++i) {
    threads.emplace_back([&] {
      try {
        const auto record =
            platform.submit("tok-alpha", Task::la, kGoodProgress);
        if (record.scored) admitted++;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::quota_exceeded) {
          refused++;
        } else {
          other++;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(admitted.load() == 3);
  CHECK(refused.load() == 7);
  CHECK(other.load() == 0);
}

// ---------------------------------------------------------------------------
// Persistence.

TEST_CASE("crash and replay reconstructs identical state") {
  Fixture fx;
  std::string leaderboard_before, series_before, record_json;
  {
    Platform platform(fx.config, fx.clock());
    platform.submit("tok-alpha", Task::la, kWeakProgress);
    fx.advance(3600);
    platform.submit("tok-alpha", Task::la, kGoodProgress);
    fx.advance(3600);
    platform.submit("tok-beta", Task::la, kWeakProgress);
    platform.submit("tok-beta", Task::la, "oops\n");  // recorded rejection
    fx.set_time("2026-01-12T09:00:00Z");
    platform.submit("tok-beta", Task::la, kGoodProgress);

    leaderboard_before = leaderboard_to_json(
        Task::la, "progress", platform.leaderboard(Task::la, "progress"));
    series_before =
        series_to_json(Task::la, platform.progress_series(Task::la));
    record_json = submission_response_json(
        platform.find_submission("tok-alpha", "sub-000001"));
  }  // platform destroyed: "crash"

  Platform replayed(fx.config, fx.clock());
  CHECK(leaderboard_to_json(Task::la, "progress",
                            replayed.leaderboard(Task::la, "progress")) ==
        leaderboard_before);
  CHECK(series_to_json(Task::la, replayed.progress_series(Task::la)) ==
        series_before);
  CHECK(submission_response_json(
            replayed.find_submission("tok-alpha", "sub-000001")) ==
        record_json);

  // Ids continue the sequence instead of restarting.
  const auto next = replayed.submit("tok-beta", Task::la, kGoodProgress);
  CHECK(next.id == "sub-000006");

  // The raw score file is stored content-addressed.
  CHECK(testing_support::slurp(fx.dir.file(
            std::string("data/files/") + sha256_hex(kGoodProgress))) ==
        kGoodProgress);
}

// ---------------------------------------------------------------------------
// Leaderboard and series.

TEST_CASE("leaderboard ranks opted-in teams by best metric") {
  Fixture fx(/*second_team_on_leaderboard=*/true);
  Platform platform(fx.config, fx.clock());
  platform.submit("tok-alpha", Task::la, kWeakProgress);
  fx.advance(60);
  platform.submit("tok-beta", Task::la, kGoodProgress);
  fx.advance(60);
  platform.submit("tok-gamma", Task::la, kGoodProgress);  // not opted in

  const auto board = platform.leaderboard(Task::la, "progress");
  REQUIRE(board.size() == 2);
  CHECK(board[0].alias == "beta");  // better (lower) min t-DCF
  CHECK(board[1].alias == "alpha");
  CHECK(board[0].best < board[1].best);
  CHECK(board[0].submissions == 1);

  // Improving alpha moves it ahead on the tie only if strictly earlier;
  // equal metrics rank the earlier achiever first.
  fx.advance(60);
  platform.submit("tok-alpha", Task::la, kGoodProgress);
  const auto after = platform.leaderboard(Task::la, "progress");
  REQUIRE(after.size() == 2);
  CHECK(after[0].alias == "beta");  // same best, achieved earlier
  CHECK(after[0].best == after[1].best);
  CHECK(after[1].submissions == 2);
}

TEST_CASE("progress series carries the running best across empty days") {
  Fixture fx;
  Platform platform(fx.config, fx.clock());
  fx.set_time("2026-01-05T10:00:00Z");
  platform.submit("tok-alpha", Task::la, kWeakProgress);
  fx.set_time("2026-01-08T10:00:00Z");  // two empty days in between
  platform.submit("tok-alpha", Task::la, kGoodProgress);
  platform.submit("tok-beta", Task::la, kWeakProgress);

  const auto series = platform.progress_series(Task::la);
  REQUIRE(series.size() == 4);  // Jan 5 .. Jan 8
  CHECK(format_utc_day(series[0].day) == "2026-01-05");
  CHECK(series[0].submissions == 1);
  REQUIRE(series[0].best.has_value());
  CHECK(series[1].submissions == 0);
  CHECK(*series[1].best == *series[0].best);  // carried forward
  CHECK(series[2].submissions == 0);
  CHECK(series[3].submissions == 2);
  // Non-increasing running best.
  for (std::size_t i = 1; i < series.size(); ++i) {
    CHECK(*series[i].best <= *series[i - 1].best);
  }
}

TEST_CASE("owner-only lookup") {
  Fixture fx;
  Platform platform(fx.config, fx.clock());
  const auto record = platform.submit("tok-alpha", Task::la, kGoodProgress);

  CHECK(platform.find_submission("tok-alpha", record.id).id == record.id);
  CHECK_THROWS_AS(platform.find_submission("tok-beta", record.id), Error);
  CHECK_THROWS_AS(platform.find_submission("tok-alpha", "sub-999999"), Error);
  CHECK_THROWS_AS(platform.find_submission("bogus", record.id), Error);
}

TEST_CASE("primary metric name") {
  CHECK(std::string(Platform::primary_metric_name(Task::la)) == "min_tdcf");
  CHECK(std::string(Platform::primary_metric_name(Task::pa)) == "min_tdcf");
  CHECK(std::string(Platform::primary_metric_name(Task::df)) == "eer_percent");
}

// ---------------------------------------------------------------------------
// HTTP endpoints.

TEST_CASE("http api end to end") {
  Fixture fx;
  Platform platform(fx.config, fx.clock());
  HttpService service(platform);
  const int port = service.start_background("127.0.0.1");
  httplib::Client client("127.0.0.1", port);

  auto submit = [&](const std::string& token, const std::string& scores) {
    httplib::MultipartFormDataItems parts = {
        {"token", token, "", ""},
        {"scores", scores, "scores.txt", "text/plain"},
    };
    return client.Post("/api/v1/LA/submissions", parts);
  };

  SUBCASE("scored submission returns the record") {
    const auto res = submit("tok-alpha", kGoodProgress);
    REQUIRE(res);
    CHECK(res->status == 200);
    const auto j = nlohmann::json::parse(res->body);
    CHECK(j["id"] == "sub-000001");
    CHECK(j["status"] == "scored");
    CHECK(j["team"] == "alpha");
    CHECK(j["results"]["min_tdcf"].get<double>() ==
          doctest::Approx(0.1588).epsilon(1e-9));
    CHECK(j["results"]["eer_percent"].get<double>() == 0.0);

    // Owner lookup via header token.
    httplib::Headers h = {{"X-Auth-Token", "tok-alpha"}};
    const auto got = client.Get("/api/v1/LA/submissions/sub-000001", h);
    REQUIRE(got);
    CHECK(got->status == 200);
    CHECK(nlohmann::json::parse(got->body)["id"] == "sub-000001");

    // Other teams cannot see it.
    httplib::Headers other = {{"X-Auth-Token", "tok-beta"}};
    const auto denied =
        client.Get("/api/v1/LA/submissions/sub-000001", other);
    REQUIRE(denied);
    CHECK(denied->status == 404);
  }

  SUBCASE("rejected submission is a 200 with the reason") {
    const auto res = submit("tok-alpha", "P1 huh\n");
    REQUIRE(res);
    CHECK(res->status == 200);
    const auto j = nlohmann::json::parse(res->body);
    CHECK(j["status"] == "rejected");
    CHECK(j["reason"] == "MalformedLine");
  }

  SUBCASE("auth, task and quota statuses") {
    CHECK(submit("bogus", kGoodProgress)->status == 401);
    {
      httplib::MultipartFormDataItems parts = {
          {"token", "tok-alpha", "", ""},
          {"scores", kGoodProgress, "scores.txt", "text/plain"},
      };
      CHECK(client.Post("/api/v1/DF/submissions", parts)->status == 404);
      CHECK(client.Post("/api/v1/XX/submissions", parts)->status == 404);
    }
    for (int i = 0; i < 3; ++i) {
      CHECK(submit("tok-alpha", kGoodProgress)->status == 200);
    }
    CHECK(submit("tok-alpha", kGoodProgress)->status == 429);

    fx.set_time("2025-06-01T00:00:00Z");  // no open phase
    CHECK(submit("tok-alpha", kGoodProgress)->status == 403);
  }

  SUBCASE("leaderboard and series endpoints") {
    submit("tok-alpha", kGoodProgress);
    submit("tok-beta", kWeakProgress);

    const auto board = client.Get("/api/v1/LA/leaderboard?phase=progress");
    REQUIRE(board);
    CHECK(board->status == 200);
    const auto bj = nlohmann::json::parse(board->body);
    CHECK(bj["task"] == "LA");
    CHECK(bj["metric"] == "min_tdcf");
    REQUIRE(bj["entries"].size() == 2);
    CHECK(bj["entries"][0]["alias"] == "alpha");

    const auto series = client.Get("/api/v1/LA/progress-series");
    REQUIRE(series);
    CHECK(series->status == 200);
    const auto sj = nlohmann::json::parse(series->body);
    REQUIRE(sj["series"].size() == 1);
    CHECK(sj["series"][0]["submissions"] == 2);

    // Unknown task in the path.
    CHECK(client.Get("/api/v1/QQ/leaderboard")->status == 404);
  }

  service.stop();
}
