#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cdarl {

using Tick = std::int64_t;
using Price = std::int64_t;
using AgentId = std::int32_t;

enum class Side : std::uint8_t { Buy, Sell };

inline Side other_side(Side s) { return s == Side::Buy ? Side::Sell : Side::Buy; }
inline const char* to_string(Side s) { return s == Side::Buy ? "BUY" : "SELL"; }

/// Unit-size limit order. Market orders are expressed as limit orders
/// priced at the standing quote, which matches immediately.
struct Order {
    Side side = Side::Buy;
    Price price = 0;
    AgentId owner = -1;
    Tick submit_time = 0;
    std::uint64_t seq = 0;  // book-assigned submission sequence
};

struct Transaction {
    AgentId buyer = -1;
    AgentId seller = -1;
    Price price = 0;
    Tick time = 0;
};

/// Environment-level market parameters.
struct MarketParams {
    Tick total_steps = 1000;        // T
    double kappa = 0.05;            // mean reversion rate, [0,1)
    double r_bar = 100000.0;        // long-run fundamental mean
    double sigma_s_sq = 1.0e6;      // per-step shock variance
    double lambda_bg = 0.0005;      // background arrival rate (per tick)
    double lambda_mm = 0.005;       // market-maker arrival rate (per tick)
    int num_background = 25;
    int pv_span = 20;               // marginal private values per trader
    double pv_sigma = 5000.0;       // private-value draw scale

    void validate() const {
        if (total_steps <= 0) throw std::invalid_argument("MarketParams: T must be positive");
        if (kappa < 0.0 || kappa >= 1.0)
            throw std::invalid_argument("MarketParams: kappa must lie in [0,1)");
        if (r_bar < 0.0) throw std::invalid_argument("MarketParams: r_bar must be nonnegative");
        if (sigma_s_sq < 0.0) throw std::invalid_argument("MarketParams: sigma_s_sq negative");
        if (lambda_bg <= 0.0 || lambda_mm <= 0.0)
            throw std::invalid_argument("MarketParams: arrival rates must be positive");
        if (num_background <= 0) throw std::invalid_argument("MarketParams: no background traders");
        if (pv_span <= 0 || pv_span % 2 != 0)
            throw std::invalid_argument("MarketParams: pv_span must be positive and even");
    }
};

/// Zero-intelligence trader parameters (surplus range and the market-order
/// threshold eta).
struct ZiParams {
    double r_min = 0.0;
    double r_max = 0.0;
    double eta = 1.0;

    void validate() const {
        if (r_min < 0.0 || r_max < r_min)
            throw std::invalid_argument("ZiParams: need 0 <= r_min <= r_max");
        if (eta <= 0.0 || eta > 1.0) throw std::invalid_argument("ZiParams: eta must be in (0,1]");
    }
    std::string name() const;
};

/// Market-maker ladder parameters.
struct MmParams {
    int num_rungs = 0;        // K
    Price rung_size = 1;      // xi
    Price min_spread = 1;     // gap between innermost rungs

    void validate() const {
        if (num_rungs < 0) throw std::invalid_argument("MmParams: num_rungs negative");
        if (rung_size <= 0) throw std::invalid_argument("MmParams: rung_size must be positive");
        if (min_spread <= 0) throw std::invalid_argument("MmParams: min_spread must be positive");
    }
    std::string name() const;
};

inline std::string format_double(double v) {
    std::string s = std::to_string(v);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

inline std::string ZiParams::name() const {
    return "zi:" + format_double(r_min) + ":" + format_double(r_max) + ":" + format_double(eta);
}

inline std::string MmParams::name() const {
    return "mm:" + std::to_string(num_rungs) + ":" + std::to_string(rung_size) + ":" +
           std::to_string(min_spread);
}

}  // namespace cdarl
