#include "ltecir/rx/pll.hpp"

#include <cmath>
#include <numeric>

namespace ltecir::rx {

namespace {
double wrap_pi(double x) {
  x = std::fmod(x + kPi, kTwoPi);
  if (x < 0.0) x += kTwoPi;
  return x - kPi;
}
}  // namespace

double loop_natural_freq(double bandwidth_hz, double damping) {
  return 8.0 * damping * bandwidth_hz / (4.0 * damping * damping + 1.0);
}

TrackingState pll_update(TrackingState st, cplx prompt, const LoopConfig& lc) {
  if (!(std::abs(prompt) > 0.0) || !std::isfinite(prompt.real()) || !std::isfinite(prompt.imag())) {
    st.lock = false;
    return st;
  }
  const double wn = loop_natural_freq(lc.bandwidth_hz, lc.damping);
  const double e = std::arg(prompt * std::exp(cplx(0.0, -st.carrier_phase_rad)));
  st.integrator_rad_s += wn * wn * lc.update_period_s * e;
  st.v_pll_rad_s = st.integrator_rad_s + 2.0 * lc.damping * wn * e;
  st.carrier_phase_rad = wrap_pi(st.carrier_phase_rad + lc.update_period_s * st.v_pll_rad_s);
  st.doppler_hz = st.v_pll_rad_s / kTwoPi;
  st.lock = std::abs(e) < 0.5;
  return st;
}

TrackingState pll_step(const TrackingState& st, const CfrEstimate& cfr, const LoopConfig& lc) {
  const cplx prompt = std::accumulate(cfr.values.begin(), cfr.values.end(), cplx(0.0));
  return pll_update(st, prompt, lc);
}

double eq1_delta_samples(double v_pll_rad_s, Eq1Scale scale, double frame_s, double sample_s,
                         double carrier_hz) {
  const double v_cycles = v_pll_rad_s / kTwoPi;
  const double d = -(frame_s / sample_s) * v_cycles;
  return scale == Eq1Scale::kLiteral ? d : d / carrier_hz;
}

}  // namespace ltecir::rx
