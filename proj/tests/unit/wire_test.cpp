#include <cmath>
#include <random>
#include <thread>

#include "doctest.h"
#include "haarboost/error.hpp"
#include "haarboost/net.hpp"
#include "haarboost/wire.hpp"

using namespace haarboost;

TEST_SUITE("wire") {
  TEST_CASE("WEIGHTS round-trips random doubles bit-exactly") {
    std::mt19937_64 rng(12);
    for (int k = 0; k < 50; ++k) {
      WeightsMsg w{1 + static_cast<int>(rng() % 1000), {}};
      for (int i = 0; i < 200; ++i) {
        const double mag = std::ldexp(static_cast<double>(rng() >> 11), -53 - static_cast<int>(rng() % 40));
        w.weights.push_back(mag);
      }
      const std::string line = encode(w);
      REQUIRE(line.find('\n') == std::string::npos);
      const auto back = std::get<WeightsMsg>(decode(line));
      REQUIRE(back.round == w.round);
      REQUIRE(back.weights == w.weights);
    }
  }

  TEST_CASE("every message type decodes to an equal value") {
    const auto hello = std::get<HelloMsg>(decode(encode(HelloMsg{RoleKind::SubMaster, "s01"})));
    CHECK(hello.role == RoleKind::SubMaster);
    CHECK(hello.node == "s01");

    const auto assign = std::get<AssignMsg>(decode(encode(AssignMsg{{55'200, 98'400}, 0xdeadbeefcafef00dull})));
    CHECK(assign.range == FeatureRange{55'200, 98'400});
    CHECK(assign.dataset_hash == 0xdeadbeefcafef00dull);

    const WeakClassifier weak{1234, -0.1 + 1e-17 * 3, -1, 0.123456789012345678};
    const auto best = std::get<BestMsg>(decode(encode(BestMsg{7, weak})));
    CHECK(best.round == 7);
    CHECK(best.weak == weak);

    StrongClassifier sc;
    sc.rounds.push_back({weak, standard_features()[1234], 0.25, std::log(4.0)});
    const auto model = std::get<ModelMsg>(decode(encode(ModelMsg{sc})));
    REQUIRE(model.model.rounds.size() == 1);
    CHECK(model.model.rounds[0].weak == weak);

    const auto err = std::get<ErrorMsg>(decode(encode(ErrorMsg{"w02", "boom \"quoted\"\n"})));
    CHECK(err.message == "boom \"quoted\"\n");
    CHECK(encode(ErrorMsg{"w02", "a\nb"}).find('\n') == std::string::npos);
  }

  TEST_CASE("strict decoding") {
    CHECK_THROWS_AS(decode("not json"), ProtocolError);
    CHECK_THROWS_AS(decode(R"({"round":1})"), ProtocolError);
    CHECK_THROWS_AS(decode(R"({"type":"PING"})"), ProtocolError);
    CHECK_THROWS_WITH_AS(decode(R"({"type":"HELLO","role":"worker","node":"w","extra":1})"),
                         doctest::Contains("unknown field"), ProtocolError);
    CHECK_THROWS_AS(decode(R"({"type":"HELLO","role":"worker"})"), ProtocolError);
    CHECK_THROWS_AS(decode(R"({"type":"BEST","round":1,"feature_index":3,"theta":0,"polarity":0,"error":0.1})"),
                    ProtocolError);
    CHECK_THROWS_AS(decode(R"({"type":"WEIGHTS","round":0,"weights":[]})"), ProtocolError);
    CHECK_THROWS_AS(decode(R"({"type":"ASSIGN","begin":0,"end":5,"dataset_hash":"xyz"})"), ProtocolError);
  }

  TEST_CASE("line channel over loopback") {
    auto listener = net::Listener::bind({"127.0.0.1", 0});
    std::thread client([port = listener.port()] {
      net::LineChannel ch(net::connect_to({"127.0.0.1", port}, net::deadline_in(std::chrono::seconds(5))));
      ch.send("first");
      ch.send(std::string(200'000, 'x'));
      CHECK(ch.recv(net::deadline_in(std::chrono::seconds(5))) == "ack");
    });
    net::LineChannel server(listener.accept(net::deadline_in(std::chrono::seconds(5))));
    CHECK(server.recv(net::deadline_in(std::chrono::seconds(5))) == "first");
    CHECK(server.recv(net::deadline_in(std::chrono::seconds(5))).size() == 200'000);
    server.send("ack");
    client.join();
    CHECK_THROWS_AS(server.recv(net::deadline_in(std::chrono::seconds(5))), net::ConnectionClosed);
  }

  TEST_CASE("timeouts and endpoints") {
    auto listener = net::Listener::bind({"127.0.0.1", 0});
    CHECK_THROWS_AS(listener.accept(net::deadline_in(std::chrono::milliseconds(50))), net::TimeoutError);
    CHECK(net::Endpoint::parse("localhost:8080").port == 8080);
    CHECK(net::Endpoint::parse("10.0.0.1:1").host == "10.0.0.1");
    CHECK_THROWS(net::Endpoint::parse("nohost"));
    CHECK_THROWS(net::Endpoint::parse("h:70000"));
  }
}
