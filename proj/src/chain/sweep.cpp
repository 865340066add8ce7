#include "rectenna/chain.hpp"

#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <ostream>
#include <thread>

namespace rectenna::chain {

namespace {

/// Runs `point(i)` for i in [0, n) on a small worker pool; results land by index.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& point) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) point(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) point(i);
        });
}

SweepRow evaluate(const ChainConfig& config, double x, std::optional<std::complex<double>> z_in) {
    SweepRow row;
    row.x = x;
    try {
        const auto r = run_chain(config, z_in);
        row.v_dc = r.v_dc;
        row.efficiency_pct = r.efficiency_pct;
        row.settled = r.settled;
    } catch (const Error&) {
        row.settled = false;
    }
    return row;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ArgumentError("log grid needs 0 < lo < hi and n >= 2");
    std::vector<double> out(n);
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

SweepResult sweep_input_power(const ChainConfig& config, double from_dbm, double to_dbm, double step_db,
                              const SweepOptions& options) {
    if (!(from_dbm < to_dbm)) throw ArgumentError("power sweep needs from < to");
    if (!(step_db > 0.0)) throw ArgumentError("power sweep step must be > 0");
    config.validate();
    const auto count = static_cast<std::size_t>(std::floor((to_dbm - from_dbm) / step_db + 1e-9)) + 1;

    // The ladder and its match do not depend on drive power.
    const auto z_in = converter_impedance(config);

    SweepResult result;
    result.kind = "power";
    result.config_hash = config_hash(config);
    result.rows.resize(count);
    parallel_for(count, options.threads, [&](std::size_t i) {
        auto point = config;
        const double dbm = from_dbm + static_cast<double>(i) * step_db;
        point.link.set_swept_dbm(dbm);
        result.rows[i] = evaluate(point, dbm, z_in);
    });
    return result;
}

SweepResult sweep_load(const ChainConfig& config, const std::vector<double>& loads, const SweepOptions& options) {
    if (loads.empty()) throw ArgumentError("load sweep needs at least one load");
    for (std::size_t i = 0; i < loads.size(); ++i) {
        if (!(loads[i] > 0.0)) throw ArgumentError("loads must be > 0");
        if (i > 0 && !(loads[i] > loads[i - 1])) throw ArgumentError("loads must be strictly increasing");
    }
    config.validate();

    SweepResult result;
    result.kind = "load";
    result.config_hash = config_hash(config);
    result.rows.resize(loads.size());
    parallel_for(loads.size(), options.threads, [&](std::size_t i) {
        auto point = config;
        point.rectifier.load_resistance = loads[i];
        result.rows[i] = evaluate(point, loads[i], std::nullopt);
    });
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        if (!result.rows[i].settled) continue;
        if (!result.argmax || result.rows[i].efficiency_pct > result.rows[*result.argmax].efficiency_pct)
            result.argmax = i;
    }
    return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "# sweep=" << result.kind << " config=" << result.config_hash << '\n';
    out << "x,v_dc_V,efficiency_pct,settled\n";
    for (const auto& r : result.rows)
        out << format_number(r.x) << ',' << format_number(r.v_dc) << ',' << format_number(r.efficiency_pct) << ','
            << (r.settled ? 1 : 0) << '\n';
}

}  // namespace rectenna::chain
