#pragma once

#include <algorithm>
#include <chrono>
#include <functional>
#include <thread>

#include "longrag/errors.hpp"

namespace longrag {

/// Bounded exponential backoff. Only TransportError is retried.
struct RetryPolicy {
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{250};
    double multiplier = 2.0;
    std::chrono::milliseconds max_backoff{8000};

    /// Delay before retry number `attempt` (1-based).
    std::chrono::milliseconds backoff(int attempt) const {
        double ms = static_cast<double>(initial_backoff.count());
        for (int i = 1; i < attempt; ++i) ms *= multiplier;
        return std::chrono::milliseconds(
                static_cast<long long>(std::min(ms, static_cast<double>(max_backoff.count()))));
    }
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

inline void sleep_for(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

/// Calls `fn` until it returns without throwing TransportError or the retry
/// budget is spent, in which case the last TransportError propagates.
template <typename F>
auto with_retry(const RetryPolicy& policy, F&& fn, const Sleeper& sleep = sleep_for)
        -> decltype(fn()) {
    for (int attempt = 0;; ++attempt) {
        try {
            return fn();
        } catch (const TransportError&) {
            if (attempt >= policy.max_retries) throw;
            sleep(policy.backoff(attempt + 1));
        }
    }
}

}  // namespace longrag
