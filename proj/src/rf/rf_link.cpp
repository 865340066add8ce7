#include "rectenna/rf_link.hpp"

#include "rectenna/errors.hpp"
#include "rectenna/units.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rectenna::rf {

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) {
    if (!(watts > 0.0)) throw ArgumentError("power must be > 0 to express in dBm");
    return 10.0 * std::log10(watts) + 30.0;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double friis_received_power(double p_t, double g_t_dbi, double g_r_dbi, double frequency,
                            double distance) {
    if (!(distance > 0.0)) throw ArgumentError("distance must be > 0");
    if (!(frequency > 0.0)) throw ArgumentError("frequency must be > 0");
    const double lambda = kSpeedOfLight / frequency;
    const double path = lambda / (4.0 * kPi * distance);
    return p_t * db_to_linear(g_t_dbi) * db_to_linear(g_r_dbi) * path * path;
}

double mismatch_fraction(double return_loss_db) {
    if (std::isnan(return_loss_db) || return_loss_db > 0.0)
        throw ArgumentError("return loss must be <= 0 dB");
    const double gamma = std::pow(10.0, return_loss_db / 20.0);
    return std::clamp(1.0 - gamma * gamma, 0.0, 1.0);
}

AntennaModel::AntennaModel(std::vector<AntennaBand> bands) : bands_(std::move(bands)) {
    if (bands_.empty()) throw ArgumentError("antenna table is empty");
    for (std::size_t i = 0; i < bands_.size(); ++i) {
        const auto& b = bands_[i];
        if (!(b.frequency > 0.0) || !std::isfinite(b.frequency))
            throw ArgumentError("antenna frequency must be positive");
        if (!(b.return_loss_db <= 0.0)) throw ArgumentError("antenna return loss must be <= 0 dB");
        if (!std::isfinite(b.gain_dbi)) throw ArgumentError("antenna gain must be finite");
        if (i > 0 && !(b.frequency > bands_[i - 1].frequency))
            throw ArgumentError("antenna frequencies must be strictly increasing");
    }
}

AntennaModel AntennaModel::measured_default() {
    std::vector<AntennaBand> bands;
    for (double f : {900e6, 1.29e9, 4.1e9, 5.6e9, 6.8e9, 9e9})
        bands.push_back({f, kDefaultReturnLossDb, kDefaultGainDbi});
    return AntennaModel(std::move(bands));
}

AntennaModel AntennaModel::with_gain_offset(double delta_db) const {
    auto bands = bands_;
    for (auto& b : bands) b.gain_dbi += delta_db;
    return AntennaModel(std::move(bands));
}

AntennaPoint antenna_at(const AntennaModel& model, double frequency) {
    const auto& bands = model.bands();
    if (!(frequency >= model.min_frequency() && frequency <= model.max_frequency()))
        throw RangeError("frequency " + format_number(frequency) + " Hz outside the antenna table [" +
                         format_number(model.min_frequency()) + ", " +
                         format_number(model.max_frequency()) + "] Hz");
    auto hi = std::lower_bound(bands.begin(), bands.end(), frequency,
                               [](const AntennaBand& b, double f) { return b.frequency < f; });
    if (hi->frequency == frequency) return {hi->gain_dbi, hi->return_loss_db};
    auto lo = hi - 1;
    const double t = (frequency - lo->frequency) / (hi->frequency - lo->frequency);
    return {lo->gain_dbi + t * (hi->gain_dbi - lo->gain_dbi),
            lo->return_loss_db + t * (hi->return_loss_db - lo->return_loss_db)};
}

AntennaModel parse_antenna_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int no = 0;
    bool header = false;
    std::vector<AntennaBand> bands;
    while (std::getline(in, line)) {
        ++no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            if (line != "freq_hz,return_loss_db,gain_dbi")
                throw ArgumentError("antenna CSV: expected header 'freq_hz,return_loss_db,gain_dbi'");
            header = true;
            continue;
        }
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 3)
            throw ArgumentError("antenna CSV line " + std::to_string(no) + ": expected 3 columns");
        double v[3];
        for (int k = 0; k < 3; ++k) {
            auto parsed = try_parse_si(cells[static_cast<std::size_t>(k)]);
            if (!parsed)
                throw ArgumentError("antenna CSV line " + std::to_string(no) + ": bad number '" +
                                    cells[static_cast<std::size_t>(k)] + "'");
            v[k] = *parsed;
        }
        bands.push_back({v[0], v[1], v[2]});
    }
    if (!header) throw ArgumentError("antenna CSV: missing header");
    return AntennaModel(std::move(bands));
}

AntennaModel read_antenna_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open antenna table '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_antenna_csv(ss.str());
}

void write_antenna_csv(std::ostream& out, const AntennaModel& model) {
    out << "freq_hz,return_loss_db,gain_dbi\n";
    for (const auto& b : model.bands())
        out << format_exact(b.frequency) << ',' << format_exact(b.return_loss_db) << ','
            << format_exact(b.gain_dbi) << '\n';
}

}  // namespace rectenna::rf
