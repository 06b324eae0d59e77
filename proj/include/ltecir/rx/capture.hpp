#pragma once

#include <filesystem>
#include <vector>

#include "ltecir/phy/grid.hpp"
#include "ltecir/rx/types.hpp"

namespace ltecir::rx {

struct CaptureResult {
  AcquisitionResult acq;
  phy::GridConfig cfg;
  double carrier_hz = 0.0;
  std::vector<CirSample> samples;        // one per tracked frame
  std::vector<TrackingLogRow> log;       // same length
  std::vector<double> esprit_delay_s;    // earliest ESPRIT delay per frame (logged)
};

// Full receiver: acquire once on the leading frames, then track frame by
// frame (CRS CFRs -> prompt -> PLL -> TOA update -> aligned CIR).  Labels are
// joined from truth_csv when provided (NaN otherwise).
CaptureResult process_capture(const std::filesystem::path& iq_path, const ReceiverConfig& rc,
                              const std::filesystem::path& truth_csv = {});

// Differential clock-bias removal against a base receiver at a known range.
// Returns the corrected rover range series in meters; logs must cover the
// same frames.
std::vector<double> remove_clock_bias(const std::vector<TrackingLogRow>& rover_log,
                                      const std::vector<TrackingLogRow>& base_log,
                                      double base_known_range_m, double sample_period_s);

void write_cir_csv(const std::vector<CirSample>& samples, const std::filesystem::path& path);
void write_tracking_csv(const std::vector<TrackingLogRow>& log,
                        const std::filesystem::path& path);
std::vector<TrackingLogRow> read_tracking_csv(const std::filesystem::path& path);

}  // namespace ltecir::rx
