// Copyright 2026 The Wayplan Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>

#include "httplib.h"
#include "json.hpp"
#include "test_support.hpp"
#include "wayplan/datagen.hpp"
#include "wayplan/error.hpp"
#include "wayplan/nl_bridge.hpp"

namespace wayplan {
namespace {

using testing::D;

constexpr const char* kDemoText =
    "Embark on a thrilling journey with these requirements. Flights: coach class, non-stop, "
    "no basic economy or mixed cabin, with a total budget of $1383. Hotels: daily budget "
    "$317, total budget $952. Travel dates: January 15th, 2025, DEN to MIA, January 17th, "
    "2025, MIA to JFK, and January 18th, 2025, JFK to DEN. The adventure awaits!";

TEST(Render, FirstVariantMatchesReferenceText) {
  EXPECT_EQ(RenderNl(testing::DemoRequest(), 0), kDemoText);
}

TEST(Parse, ReferenceTextRecoversRequest) {
  EXPECT_EQ(ParseNl(kDemoText), testing::DemoRequest());
}

TEST(Render, VariantsDifferAndRoundTrip) {
  const SymbolicRequest r = testing::DemoRequest();
  std::vector<std::string> texts;
  for (std::uint64_t s = 0; s < kParaphraseVariants; ++s) {
    texts.push_back(RenderNl(r, s));
    EXPECT_EQ(ParseNl(texts.back()), r) << texts.back();
  }
  for (std::size_t i = 0; i < texts.size(); ++i) {
    for (std::size_t j = i + 1; j < texts.size(); ++j) EXPECT_NE(texts[i], texts[j]);
  }
  EXPECT_EQ(RenderNl(r, 2), RenderNl(r, 2));
}

TEST(Render, BareRequestHasOnlyLegs) {
  SymbolicRequest r;
  r.legs = {{D(2025, 6, 1), "SEA", "SFO"}};
  r.trip_kind = TripKind::kOneWay;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const std::string text = RenderNl(r, s);
    EXPECT_EQ(text.find("$"), std::string::npos);
    EXPECT_EQ(ParseNl(text), r) << text;
  }
}

TEST(RoundTrip, GeneratedRequestsAllSeeds) {
  const GenParams gp = testing::SmallGen(99);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const SymbolicRequest r = GenRequest(gp, i);
    for (std::uint64_t s : {0ull, 1ull, 2ull, 3ull, 4ull + 37ull * i}) {
      const std::string text = RenderNl(r, s);
      const SymbolicRequest back = ParseNl(text);
      ASSERT_TRUE(ExactMatch(back, r).is_match) << text;
      ++checked;
    }
  }
  EXPECT_EQ(checked, 1500);
}

TEST(Slots, DatesAndClocks) {
  EXPECT_EQ(FormatLongDate(D(2025, 1, 1)), "January 1st, 2025");
  EXPECT_EQ(FormatLongDate(D(2025, 3, 2)), "March 2nd, 2025");
  EXPECT_EQ(FormatLongDate(D(2025, 3, 3)), "March 3rd, 2025");
  EXPECT_EQ(FormatLongDate(D(2025, 3, 11)), "March 11th, 2025");
  EXPECT_EQ(FormatLongDate(D(2025, 3, 12)), "March 12th, 2025");
  EXPECT_EQ(FormatLongDate(D(2025, 3, 22)), "March 22nd, 2025");
  EXPECT_EQ(ParseLongDate("March 22nd, 2025"), D(2025, 3, 22));
  EXPECT_FALSE(ParseLongDate("March 22st, 2025"));
  EXPECT_FALSE(ParseLongDate("February 29th, 2025"));
  EXPECT_EQ(FormatClock(0), "12:00 AM");
  EXPECT_EQ(FormatClock(12 * 60 + 5), "12:05 PM");
  EXPECT_EQ(FormatClock(24 * 60), "midnight");
  EXPECT_EQ(ParseClock("8:30 PM"), 20 * 60 + 30);
  EXPECT_EQ(ParseClock("midnight"), 24 * 60);
  EXPECT_FALSE(ParseClock("13:00 PM"));
}

struct Failure {
  ErrorCode code;
  std::string span_text;
};

Failure ParseFailure(const std::string& text) {
  try {
    ParseNl(text);
  } catch (const Error& e) {
    Failure f{e.code(), ""};
    if (e.span()) f.span_text = text.substr(e.span()->begin, e.span()->end - e.span()->begin);
    return f;
  }
  ADD_FAILURE() << "parsed: " << text;
  return {};
}

TEST(Parse, ErrorsCarrySpans) {
  const std::string legs = "Travel dates: January 15th, 2025, DEN to MIA.";
  Failure f = ParseFailure(legs + " Flights: teleport class.");
  EXPECT_EQ(f.code, ErrorCode::kUnparsableSegment);
  EXPECT_EQ(f.span_text, "teleport class");
  f = ParseFailure(legs + " Flights: non-stop, non-stop.");
  EXPECT_EQ(f.code, ErrorCode::kUnparsableSegment);
  EXPECT_EQ(f.span_text, "non-stop");
  f = ParseFailure("Hello there. " + legs);
  EXPECT_EQ(f.code, ErrorCode::kUnparsableSegment);
  EXPECT_EQ(f.span_text, "Hello there");
  f = ParseFailure("Travel dates: February 30th, 2025, DEN to MIA.");
  EXPECT_EQ(f.code, ErrorCode::kUnparsableSegment);
  EXPECT_EQ(f.span_text, "February 30th, 2025, DEN to MIA");
  EXPECT_EQ(ParseFailure("").code, ErrorCode::kMissingLegs);
  EXPECT_EQ(ParseFailure("Embark on a thrilling journey with these requirements.").code,
            ErrorCode::kMissingLegs);
  EXPECT_EQ(ParseFailure("Travel dates: January 15th, 2025, DEN to MIA, January 14th, 2025, "
                         "MIA to DEN.")
                .code,
            ErrorCode::kInvariantViolation);
}

// Replays canned responses and records request bodies.
class FakeTransport : public Transport {
 public:
  explicit FakeTransport(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string Post(const ExternalEndpoint&, const std::string& body) override {
    bodies.push_back(body);
    if (next_ >= replies_.size()) {
      throw Error(ErrorCode::kEndpointUnreachable, "no more replies");
    }
    return replies_[next_++];
  }
  std::vector<std::string> bodies;

 private:
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
};

TranslatorBackend External(int retries) {
  ExternalEndpoint e;
  e.url = "http://127.0.0.1:9/translate";
  e.model = "test-model";
  e.max_retries = retries;
  return TranslatorBackend::External(e);
}

TEST(Translate, TemplateBackend) {
  const Translation t = Translate(kDemoText, TranslatorBackend::Template());
  EXPECT_EQ(t.request, testing::DemoRequest());
  EXPECT_TRUE(t.valid_json);
  EXPECT_EQ(t.attempts, 1);
  EXPECT_EQ(t.raw_output, SerializeRequest(t.request));
}

TEST(Translate, ExternalRetriesThenSucceeds) {
  const std::string good = SerializeRequest(testing::DemoRequest());
  FakeTransport fake({"not json", good});
  const Translation t = Translate("some text", External(2), &fake);
  EXPECT_EQ(t.request, testing::DemoRequest());
  EXPECT_FALSE(t.valid_json);
  EXPECT_EQ(t.attempts, 2);
  ASSERT_EQ(fake.bodies.size(), 2u);
  const auto body = nlohmann::json::parse(fake.bodies[0]);
  EXPECT_EQ(body["user_text"], "some text");
  EXPECT_EQ(body["model"], "test-model");
  EXPECT_TRUE(body.contains("system_prompt"));
}

TEST(Translate, ExternalGivesUp) {
  FakeTransport fake({"{}", "[1]", R"({"legs":[]})"});
  try {
    Translate("x", External(2), &fake);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidOutputAfterRetries);
  }
  EXPECT_EQ(fake.bodies.size(), 3u);
  FakeTransport dead({});
  try {
    Translate("x", External(2), &dead);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEndpointUnreachable);
  }
}

TEST(Translate, BackendValidation) {
  TranslatorBackend b = External(1);
  b.endpoint.url.clear();
  EXPECT_THROW(ValidateBackend(b), Error);
  b = External(-1);
  EXPECT_THROW(ValidateBackend(b), Error);
  b = External(0);
  b.endpoint.timeout_ms = 0;
  EXPECT_THROW(ValidateBackend(b), Error);
}

TEST(Translate, HttpTransportAgainstLocalServer) {
  httplib::Server server;
  const std::string good = SerializeRequest(testing::DemoRequest());
  std::string seen;
  server.Post("/translate", [&](const httplib::Request& req, httplib::Response& res) {
    seen = req.body;
    res.set_content(good, "application/json");
  });
  server.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread loop([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  TranslatorBackend b = External(0);
  b.endpoint.url = "http://127.0.0.1:" + std::to_string(port) + "/translate";
  b.endpoint.timeout_ms = 5000;
  const Translation t = Translate(kDemoText, b);
  EXPECT_EQ(t.request, testing::DemoRequest());
  EXPECT_EQ(nlohmann::json::parse(seen)["user_text"], kDemoText);

  b.endpoint.url = "http://127.0.0.1:" + std::to_string(port) + "/broken";
  try {
    Translate(kDemoText, b);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEndpointUnreachable);
  }
  b.endpoint.url = "https://127.0.0.1/translate";
  EXPECT_THROW(Translate(kDemoText, b), Error);
  server.stop();
  loop.join();
}

}  // namespace
}  // namespace wayplan
