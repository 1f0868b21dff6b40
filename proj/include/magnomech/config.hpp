#pragma once

#include <string>

#include "magnomech/errors.hpp"
#include "magnomech/params.hpp"

namespace magnomech {

/// Loads SystemParams from JSON text. The file must carry a "units" key
/// ("hz" or "rad_s"); frequency-like fields then live under "freqs_hz"
/// (multiplied by 2 pi on load) or "freqs_rad_s" (taken as is). Complex
/// fields (g_ma, eps_d) accept a number or a [re, im] pair. eps_d may
/// instead be derived from "B0" and "V"; an explicit eps_d wins with a
/// warning. omega_m may be derived from "H_bias", n_th from "T_env".
SystemParams load_config(const std::string& json_text, WarningLog* log = nullptr);

SystemParams load_config_file(const std::string& path, WarningLog* log = nullptr);

/// Canonical serialisation (units = "rad_s"), suitable for embedding in
/// result metadata and for feeding back through load_config.
std::string dump_config(const SystemParams& p);

}  // namespace magnomech
