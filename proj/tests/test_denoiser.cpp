#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "coldwave/denoiser.hpp"
#include "coldwave/errors.hpp"
#include "coldwave/rng.hpp"
#include "test_util.hpp"

using namespace coldwave;
using testing::random_signal;

namespace {

const DenoiserConfig kSmall{6, 10, 3, 4};

// Central finite differences of f(theta) = fixed_grad . output(theta).
std::vector<double> fd_vjp_grads(DenoiserNet& net, const Signal& x, int t,
                                 const std::vector<double>& grad_out, double h) {
    std::vector<double> fd(net.param_count());
    auto dot_out = [&]() {
        const Signal out = net.restore(x, t);
        double acc = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) acc += grad_out[i] * out.samples[i];
        return acc;
    };
    for (std::size_t p = 0; p < net.param_count(); ++p) {
        const double saved = net.params()[p];
        net.params()[p] = saved + h;
        const double up = dot_out();
        net.params()[p] = saved - h;
        const double down = dot_out();
        net.params()[p] = saved;
        fd[p] = (up - down) / (2.0 * h);
    }
    return fd;
}

}  // namespace

TEST_CASE("step embedding matches the trigonometric oracle values") {
    const auto e0 = step_embedding(0, 4);
    CHECK(e0 == std::vector<double>{0.0, 1.0, 0.0, 1.0});

    const auto e1 = step_embedding(1, 2);
    CHECK(e1[0] == doctest::Approx(0.841471).epsilon(1e-6));
    CHECK(e1[1] == doctest::Approx(0.540302).epsilon(1e-6));

    const auto e2 = step_embedding(1, 4);
    CHECK(e2[0] == doctest::Approx(0.841471).epsilon(1e-6));
    CHECK(e2[1] == doctest::Approx(0.540302).epsilon(1e-6));
    CHECK(e2[2] == doctest::Approx(0.0099998).epsilon(1e-4));
    CHECK(e2[3] == doctest::Approx(0.99995).epsilon(1e-6));
}

TEST_CASE("step embedding rejects odd or tiny dimensions and negative steps") {
    CHECK_THROWS_AS(step_embedding(1, 3), ConfigError);
    CHECK_THROWS_AS(step_embedding(1, 0), ConfigError);
    CHECK_THROWS_AS(step_embedding(-1, 4), ConfigError);
}

TEST_CASE("zero-parameter network outputs silence") {
    DenoiserNet net(kSmall, 5);
    for (auto& p : net.params()) p = 0.0;
    const Signal out = net.restore(random_signal(1, 20), 3);
    for (double v : out.samples) CHECK(v == 0.0);
}

TEST_CASE("network construction and outputs are seed-deterministic") {
    DenoiserNet a(kSmall, 123), b(kSmall, 123), c(kSmall, 124);
    CHECK(std::vector<double>(a.params().begin(), a.params().end()) ==
          std::vector<double>(b.params().begin(), b.params().end()));
    CHECK(std::vector<double>(a.params().begin(), a.params().end()) !=
          std::vector<double>(c.params().begin(), c.params().end()));
    const Signal x = random_signal(9, 33);
    CHECK(a.restore(x, 2).samples == b.restore(x, 2).samples);
}

TEST_CASE("restorer contract: output length equals input length") {
    DenoiserNet net(kSmall, 17);
    const Signal clean = random_signal(50, 19);
    OracleRestorer oracle(clean);
    IdentityRestorer identity;
    const int F = kSmall.frame;
    for (std::size_t len : {std::size_t{1}, static_cast<std::size_t>(F - 1),
                            static_cast<std::size_t>(F), static_cast<std::size_t>(F + 1),
                            static_cast<std::size_t>(3 * F + 7)}) {
        const Signal x = random_signal(len, len);
        CHECK(net.restore(x, 2).size() == len);
        CHECK(identity.restore(x, 2).size() == len);
        if (len == 19) CHECK(oracle.restore(x, 2).size() == len);
    }
}

TEST_CASE("network output stays inside the tanh range") {
    DenoiserNet net(DenoiserConfig{8, 32, 2, 8}, 3);
    const Signal x = random_signal(21, 100, 8000, 5.0);
    for (double v : net.restore(x, 7).samples) {
        CHECK(v > -1.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("zero output gradient gives zero parameter gradients") {
    DenoiserNet net(kSmall, 31);
    const Signal x = random_signal(32, 15);
    const std::vector<double> zero(x.size(), 0.0);
    for (double g : net.forward_backward(x, 1, zero)) CHECK(g == 0.0);
}

TEST_CASE("with zero parameters only the output bias sees the gradient") {
    DenoiserNet net(kSmall, 8);
    for (auto& p : net.params()) p = 0.0;
    const Signal x = random_signal(77, static_cast<std::size_t>(kSmall.frame));
    std::vector<double> grad_out(x.size(), 0.0);
    grad_out[2] = 1.0;
    const auto grads = net.forward_backward(x, 1, grad_out);
    // tanh'(0) = 1 at the output layer, every other path is gated by zero
    // weights or zero activations.
    std::size_t nonzero = 0;
    for (double g : grads) nonzero += g != 0.0;
    CHECK(nonzero == 1);
    // Output bias block is the last F entries.
    CHECK(grads[grads.size() - static_cast<std::size_t>(kSmall.frame) + 2] == 1.0);
}

TEST_CASE("analytic VJP matches central finite differences on every parameter") {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        DenoiserNet net(kSmall, seed);
        const Signal x = random_signal(seed + 100, 15);  // 3 frames, padded tail
        Rng rng(seed + 200);
        std::vector<double> grad_out(x.size());
        for (auto& g : grad_out) g = rng.uniform(-1.0, 1.0);

        const auto analytic = net.forward_backward(x, 3, grad_out);
        const auto fd = fd_vjp_grads(net, x, 3, grad_out, 1e-6);
        CHECK(testing::max_rel_err(analytic, fd, 1e-6) < 1e-5);
    }
}

TEST_CASE("analytic input gradient matches finite differences") {
    DenoiserNet net(kSmall, 21);
    Signal x = random_signal(300, 13);
    Rng rng(301);
    std::vector<double> grad_out(x.size());
    for (auto& g : grad_out) g = rng.uniform(-1.0, 1.0);

    std::vector<double> grad_input;
    net.forward_backward(x, 2, grad_out, &grad_input);
    REQUIRE(grad_input.size() == x.size());

    auto dot_out = [&]() {
        const Signal out = net.restore(x, 2);
        double acc = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) acc += grad_out[i] * out.samples[i];
        return acc;
    };
    const double h = 1e-6;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x.samples[i];
        x.samples[i] = saved + h;
        const double up = dot_out();
        x.samples[i] = saved - h;
        const double down = dot_out();
        x.samples[i] = saved;
        const double fd = (up - down) / (2.0 * h);
        const double denom = std::max({std::fabs(fd), std::fabs(grad_input[i]), 1e-6});
        CHECK(std::fabs(fd - grad_input[i]) / denom < 1e-5);
    }
}

TEST_CASE("sgd_update arithmetic and rejection paths") {
    DenoiserNet net(kSmall, 44);
    std::vector<double> before(net.params().begin(), net.params().end());

    std::vector<double> zero(net.param_count(), 0.0);
    net.sgd_update(zero, 0.5);
    CHECK(std::vector<double>(net.params().begin(), net.params().end()) == before);

    std::vector<double> grads(net.param_count(), 0.0);
    grads[0] = 2.0;
    net.sgd_update(grads, 0.0);  // lr = 0 leaves the model unchanged
    CHECK(std::vector<double>(net.params().begin(), net.params().end()) == before);

    net.params()[0] = 1.0;
    net.sgd_update(grads, 0.1);
    CHECK(net.params()[0] == doctest::Approx(0.8).epsilon(1e-15));

    grads[1] = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> saved(net.params().begin(), net.params().end());
    CHECK_THROWS_AS(net.sgd_update(grads, 0.1), NumericError);
    CHECK(std::vector<double>(net.params().begin(), net.params().end()) == saved);

    CHECK_THROWS_AS(net.sgd_update(zero, -1.0), ConfigError);
    CHECK_THROWS_AS(net.sgd_update(std::vector<double>(3, 0.0), 0.1), ConfigError);
}

TEST_CASE("non-finite input is reported as a numeric error") {
    DenoiserNet net(kSmall, 50);
    Signal x = random_signal(51, 10);
    x.samples[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(net.restore(x, 1), NumericError);
}

TEST_CASE("checkpoint round trip preserves everything") {
    DenoiserNet net(kSmall, 61);
    std::stringstream buffer;
    net.save(buffer, 50, 0.008, 8000);

    const LoadedDenoiser loaded = DenoiserNet::load(buffer);
    CHECK(loaded.schedule_steps == 50);
    CHECK(loaded.schedule_s == 0.008);
    CHECK(loaded.sample_rate == 8000);
    CHECK(loaded.net.config().frame == kSmall.frame);
    CHECK(loaded.net.config().hidden == kSmall.hidden);
    CHECK(loaded.net.config().layers == kSmall.layers);
    CHECK(loaded.net.config().embed == kSmall.embed);
    CHECK(std::vector<double>(loaded.net.params().begin(), loaded.net.params().end()) ==
          std::vector<double>(net.params().begin(), net.params().end()));

    const Signal x = random_signal(62, 40);
    CHECK(loaded.net.restore(x, 5).samples == net.restore(x, 5).samples);
}

TEST_CASE("checkpoint loader names the offending field") {
    std::stringstream bad("not a checkpoint at all");
    CHECK_THROWS_WITH_AS(static_cast<void>(DenoiserNet::load(bad)),
                         doctest::Contains("magic"), DataError);

    DenoiserNet net(kSmall, 63);
    std::stringstream buffer;
    net.save(buffer, 10, 0.008, 8000);
    std::string bytes = buffer.str();
    bytes.resize(bytes.size() / 2);  // truncate the parameter block
    std::stringstream truncated(bytes);
    CHECK_THROWS_AS(static_cast<void>(DenoiserNet::load(truncated)), DataError);
}
