#include "ltecir/phy/reference_signals.hpp"

#include <cmath>
#include <stdexcept>

namespace ltecir::phy {

namespace {

// m-sequence helpers for SSS: length-31 binary sequences from 5-bit LFSRs with
// initial state x(0..4) = (0,0,0,0,1).
std::array<int, 31> lfsr31(int (*next)(const std::array<int, 36>&, int)) {
  std::array<int, 36> x{};
  x[4] = 1;
  for (int i = 0; i + 5 < 36; ++i) x[i + 5] = next(x, i);
  std::array<int, 31> s;
  for (int i = 0; i < 31; ++i) s[i] = 1 - 2 * x[i];
  return s;
}

const std::array<int, 31>& s_tilde() {
  static const auto s = lfsr31([](const std::array<int, 36>& x, int i) {
    return (x[i + 2] + x[i]) % 2;
  });
  return s;
}

const std::array<int, 31>& c_tilde() {
  static const auto s = lfsr31([](const std::array<int, 36>& x, int i) {
    return (x[i + 3] + x[i]) % 2;
  });
  return s;
}

const std::array<int, 31>& z_tilde() {
  static const auto s = lfsr31([](const std::array<int, 36>& x, int i) {
    return (x[i + 4] + x[i + 2] + x[i + 1] + x[i]) % 2;
  });
  return s;
}

}  // namespace

std::vector<cplx> generate_pss(int nid2) {
  if (nid2 < 0 || nid2 > 2) throw std::invalid_argument("nid2 must be 0..2");
  static constexpr int kRoots[3] = {25, 29, 34};
  const double u = kRoots[nid2];
  std::vector<cplx> d(62);
  for (int n = 0; n < 31; ++n)
    d[n] = std::exp(cplx(0.0, -kPi * u * n * (n + 1) / 63.0));
  for (int n = 31; n < 62; ++n)
    d[n] = std::exp(cplx(0.0, -kPi * u * (n + 1) * (n + 2) / 63.0));
  return d;
}

std::vector<cplx> generate_sss(int nid1, int nid2, bool subframe5) {
  if (nid1 < 0 || nid1 > 167) throw std::invalid_argument("nid1 must be 0..167");
  if (nid2 < 0 || nid2 > 2) throw std::invalid_argument("nid2 must be 0..2");
  const int qp = nid1 / 30;
  const int q = (nid1 + qp * (qp + 1) / 2) / 30;
  const int mp = nid1 + q * (q + 1) / 2;
  const int m0 = mp % 31;
  const int m1 = (m0 + mp / 31 + 1) % 31;

  const auto& st = s_tilde();
  const auto& ct = c_tilde();
  const auto& zt = z_tilde();

  std::vector<cplx> d(62);
  for (int n = 0; n < 31; ++n) {
    const int s_m0 = st[(n + m0) % 31];
    const int s_m1 = st[(n + m1) % 31];
    const int c0 = ct[(n + nid2) % 31];
    const int c1 = ct[(n + nid2 + 3) % 31];
    const int z_m0 = zt[(n + (m0 % 8)) % 31];
    const int z_m1 = zt[(n + (m1 % 8)) % 31];
    if (!subframe5) {
      d[2 * n] = static_cast<double>(s_m0 * c0);
      d[2 * n + 1] = static_cast<double>(s_m1 * c1 * z_m0);
    } else {
      d[2 * n] = static_cast<double>(s_m1 * c0);
      d[2 * n + 1] = static_cast<double>(s_m0 * c1 * z_m1);
    }
  }
  return d;
}

std::vector<int> gold_sequence(uint32_t c_init, int len) {
  constexpr int kNc = 1600;
  std::vector<uint8_t> x1(kNc + len + 31), x2(kNc + len + 31);
  x1[0] = 1;
  for (int i = 0; i < 31; ++i) x2[i] = (c_init >> i) & 1u;
  for (int i = 0; i + 31 < static_cast<int>(x1.size()); ++i) {
    x1[i + 31] = (x1[i + 3] + x1[i]) % 2;
    x2[i + 31] = (x2[i + 3] + x2[i + 2] + x2[i + 1] + x2[i]) % 2;
  }
  std::vector<int> c(len);
  for (int n = 0; n < len; ++n) c[n] = (x1[n + kNc] + x2[n + kNc]) % 2;
  return c;
}

std::vector<cplx> generate_crs(const GridConfig& cfg, int ns, int l) {
  if (ns < 0 || ns >= kSlotsPerFrame) throw std::invalid_argument("slot out of range");
  if (!is_crs_symbol(l)) throw std::invalid_argument("not a CRS symbol: l=" + std::to_string(l));
  constexpr int kNrbMax = 110;
  const uint32_t c_init =
      (1u << 10) * static_cast<uint32_t>(7 * (ns + 1) + l + 1) *
          static_cast<uint32_t>(2 * cfg.cell_id + 1) +
      2u * static_cast<uint32_t>(cfg.cell_id) + 1u;  // +1: normal CP
  const auto c = gold_sequence(c_init, 4 * kNrbMax);

  const int nrb = cfg.used_subcarriers / 12;
  const int n_re = 2 * nrb;  // CRS REs per bearing symbol, port 0
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<cplx> r(n_re);
  for (int m = 0; m < n_re; ++m) {
    const int mp = m + kNrbMax - nrb;
    r[m] = cplx(inv_sqrt2 * (1 - 2 * c[2 * mp]), inv_sqrt2 * (1 - 2 * c[2 * mp + 1]));
  }
  return r;
}

std::vector<int> crs_positions(const GridConfig& cfg, int l) {
  if (!is_crs_symbol(l)) throw std::invalid_argument("not a CRS symbol");
  const int v = (l == 0) ? 0 : 3;
  const int shift = (v + cfg.crs_shift()) % 6;
  std::vector<int> pos;
  pos.reserve(static_cast<size_t>(cfg.used_subcarriers / 6));
  for (int k = shift; k < cfg.used_subcarriers; k += 6) pos.push_back(k);
  return pos;
}

bool is_crs_symbol(int l_in_slot) { return l_in_slot == 0 || l_in_slot == 4; }

std::vector<int> sync_positions(const GridConfig& cfg) {
  std::vector<int> pos(62);
  const int first = cfg.used_subcarriers / 2 - 31;
  for (int i = 0; i < 62; ++i) pos[i] = first + i;
  return pos;
}

ReferenceSignals generate_reference_signals(const GridConfig& cfg) {
  ReferenceSignals rs;
  rs.pss = generate_pss(cfg.nid2());
  rs.sss_sf0 = generate_sss(cfg.nid1(), cfg.nid2(), false);
  rs.sss_sf5 = generate_sss(cfg.nid1(), cfg.nid2(), true);
  return rs;
}

}  // namespace ltecir::phy
