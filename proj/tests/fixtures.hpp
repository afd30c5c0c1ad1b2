#pragma once

#include <string>

#include "monoinv/io.hpp"

inline std::string data_path(const std::string& name) { return std::string(MONOINV_DATA_DIR) + "/" + name; }

inline monoinv::io::LoadedSystem load_switched() { return monoinv::io::load_system(data_path("switched.json")); }

inline monoinv::io::LoadedSystem load_traffic(monoinv::io::BetaResolution r = monoinv::io::BetaResolution::First) {
  return monoinv::io::load_system(data_path("traffic_network.json"), r);
}

inline monoinv::SSequenceCertificate load_cert(const monoinv::io::LoadedSystem& sys, const std::string& name) {
  return monoinv::io::certificate_from_json(*sys.system, monoinv::io::read_json(data_path(name)));
}
