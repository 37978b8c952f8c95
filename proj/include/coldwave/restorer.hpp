#pragma once

#include "coldwave/errors.hpp"
#include "coldwave/signal.hpp"

namespace coldwave {

/// Restoration operator contract: map a degraded signal and its severity to
/// an estimate of the clean signal of the same length.
class Restorer {
public:
    virtual ~Restorer() = default;
    virtual Signal restore(const Signal& x_t, int t) const = 0;
};

/// Test instrument: returns the stored clean signal regardless of input.
class OracleRestorer : public Restorer {
public:
    explicit OracleRestorer(Signal clean) : clean_(std::move(clean)) {}

    Signal restore(const Signal& x_t, int /*t*/) const override {
        if (x_t.size() != clean_.size())
            throw DataError("oracle restorer: input length " + std::to_string(x_t.size()) +
                            " does not match stored clean length " + std::to_string(clean_.size()));
        return clean_;
    }

private:
    Signal clean_;
};

/// Baseline that does nothing: restore(x_t, t) = x_t.
class IdentityRestorer : public Restorer {
public:
    Signal restore(const Signal& x_t, int /*t*/) const override { return x_t; }
};

}  // namespace coldwave
