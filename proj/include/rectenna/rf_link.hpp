// rf_link.hpp - front-end model: power units, free-space link, antenna table
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace rectenna::rf {

/// 10^((p - 30) / 10)
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

double db_to_linear(double db);

/// Friis: p_t g_t g_r (lambda / (4 pi d))^2 with gains in dBi.
double friis_received_power(double p_t, double g_t_dbi, double g_r_dbi, double frequency,
                            double distance);

/// 1 - |Gamma|^2 with |Gamma| = 10^(return_loss_db / 20). Requires
/// return_loss_db <= 0; -infinity means a perfect match.
double mismatch_fraction(double return_loss_db);

struct AntennaBand {
    double frequency;       // Hz
    double return_loss_db;  // <= 0
    double gain_dbi;
};

struct AntennaPoint {
    double gain_dbi;
    double return_loss_db;
};

class AntennaModel {
public:
    /// Throws ArgumentError unless frequencies strictly increase and every
    /// return loss is <= 0.
    explicit AntennaModel(std::vector<AntennaBand> bands);

    /// Measured resonances of the 2x2 coplanar monopole array (900 MHz,
    /// 1.29 GHz, 4.1 GHz, 5.6 GHz, 6.8 GHz, 9 GHz) with placeholder depth
    /// and gain at every band.
    static AntennaModel measured_default();

    inline static constexpr double kDefaultReturnLossDb = -15.0;
    inline static constexpr double kDefaultGainDbi = 2.0;

    const std::vector<AntennaBand>& bands() const { return bands_; }
    double min_frequency() const { return bands_.front().frequency; }
    double max_frequency() const { return bands_.back().frequency; }

    /// Copy with every gain shifted by `delta_db`.
    AntennaModel with_gain_offset(double delta_db) const;

private:
    std::vector<AntennaBand> bands_;
};

/// Linear interpolation of gain and return loss; exact at tabulated points.
/// Throws RangeError outside the table.
AntennaPoint antenna_at(const AntennaModel& model, double frequency);

/// CSV with header `freq_hz,return_loss_db,gain_dbi`.
AntennaModel parse_antenna_csv(std::string_view text);
AntennaModel read_antenna_csv(const std::filesystem::path& path);
void write_antenna_csv(std::ostream& out, const AntennaModel& model);

}  // namespace rectenna::rf
