#pragma once

#include "bsv/bell_state.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>

namespace bsv {

/// {label, gamma, cutoff, truncation_mode, amplitudes: [[n, m, re, im], ...]}
/// Only in-range entries are written; absent entries read back as zero.
inline nlohmann::json to_json(const FourModeState& s) {
  nlohmann::json amps = nlohmann::json::array();
  const int c = s.cutoff();
  for (int n = 0; n <= c; ++n) {
    for (int m = 0; m <= c; ++m) {
      if (!s.in_range(n, m)) continue;
      const cplx a = s.amplitude(n, m);
      amps.push_back({n, m, a.real(), a.imag()});
    }
  }
  return {{"label", std::string(to_string(s.label()))},
          {"gamma", s.gain().value()},
          {"cutoff", c},
          {"truncation_mode", std::string(to_string(s.truncation_mode()))},
          {"amplitudes", std::move(amps)}};
}

inline FourModeState four_mode_state_from_json(const nlohmann::json& j) {
  const auto label = parse_bell_label(j.at("label").get<std::string>());
  if (!label) throw std::invalid_argument("unknown label " + j.at("label").dump());
  const auto mode = parse_truncation_mode(j.at("truncation_mode").get<std::string>());
  if (!mode) throw std::invalid_argument("unknown truncation mode " + j.at("truncation_mode").dump());
  const int cutoff = j.at("cutoff").get<int>();
  SchmidtSpectrum spec(GainParameter(j.at("gamma").get<double>()), cutoff);
  const auto side = static_cast<std::size_t>(cutoff) + 1;
  std::vector<cplx> table(side * side, 0.0);
  for (const auto& row : j.at("amplitudes")) {
    const int n = row.at(0).get<int>(), m = row.at(1).get<int>();
    if (n < 0 || m < 0 || n > cutoff || m > cutoff) throw std::out_of_range("amplitude index outside cutoff");
    if (*mode == TruncationMode::TotalPhotonCutoff && n + m > cutoff)
      throw std::out_of_range("amplitude index outside total-photon cutoff");
    table[static_cast<std::size_t>(n) * side + static_cast<std::size_t>(m)] = {row.at(2).get<double>(),
                                                                               row.at(3).get<double>()};
  }
  return FourModeState(*label, std::move(spec), *mode, std::move(table));
}

}  // namespace bsv
