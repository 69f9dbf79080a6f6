// SPDX-License-Identifier: Apache-2.0

#include "fdx/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "fdx/errors.hpp"

namespace fdx {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

long long parse_ll(const std::string& key, const std::string& v) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
    return out;
}

int parse_int(const std::string& key, const std::string& v) {
    const long long x = parse_ll(key, v);
    if (x < INT32_MIN || x > INT32_MAX)
        throw ConfigError("config key '" + key + "': value out of range");
    return static_cast<int>(x);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" + v +
                          "'");
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    if (v == "-inf") return -std::numeric_limits<double>::infinity();
    if (v == "inf") return std::numeric_limits<double>::infinity();
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    std::string item;
    std::stringstream ss(v);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("config key '" + key + "': empty list element");
        out.push_back(parse_int(key, item));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

Mode parse_mode(const std::string& key, const std::string& v) {
    if (v == "linear") return Mode::kLinear;
    if (v == "wl") return Mode::kWidelyLinear;
    throw ConfigError("config key '" + key + "': expected linear or wl, got '" + v + "'");
}

EstimationRate parse_est_rate(const std::string& key, const std::string& v) {
    if (v == "symbol") return EstimationRate::kSymbol;
    if (v == "oversampled") return EstimationRate::kOversampled;
    throw ConfigError("config key '" + key + "': expected symbol or oversampled, got '" + v +
                      "'");
}

std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

std::string fmt(const std::vector<int>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(xs[i]);
    }
    return out;
}

using Setter = std::function<void(SimConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"n_subcarriers", [](SimConfig& c, auto& k, auto& v) { c.n_subcarriers = parse_int(k, v); }},
        {"cp_len", [](SimConfig& c, auto& k, auto& v) { c.cp_len = parse_int(k, v); }},
        {"constellation", [](SimConfig& c, auto&, auto& v) { c.constellation = v; }},
        {"oversampling", [](SimConfig& c, auto& k, auto& v) { c.oversampling = parse_int(k, v); }},
        {"bandwidth_hz", [](SimConfig& c, auto& k, auto& v) { c.bandwidth_hz = parse_double(k, v); }},
        {"sample_rate_hz", [](SimConfig& c, auto& k, auto& v) { c.sample_rate_hz = parse_double(k, v); }},
        {"estimation_rate", [](SimConfig& c, auto& k, auto& v) { c.estimation_rate = parse_est_rate(k, v); }},
        {"tx_power_dbm", [](SimConfig& c, auto& k, auto& v) { c.tx_power_dbm = parse_double(k, v); }},
        {"antenna_separation_db", [](SimConfig& c, auto& k, auto& v) { c.antenna_separation_db = parse_double(k, v); }},
        {"rf_cancellation_db", [](SimConfig& c, auto& k, auto& v) { c.rf_cancellation_db = parse_double(k, v); }},
        {"soi_power_dbm", [](SimConfig& c, auto& k, auto& v) { c.soi_power_dbm = parse_double(k, v); }},
        {"n_tx", [](SimConfig& c, auto& k, auto& v) { c.n_tx = parse_int(k, v); }},
        {"n_rx", [](SimConfig& c, auto& k, auto& v) { c.n_rx = parse_int(k, v); }},
        {"channel_len_m", [](SimConfig& c, auto& k, auto& v) { c.channel_len_m = parse_int(k, v); }},
        {"channel_dominant_fraction", [](SimConfig& c, auto& k, auto& v) { c.channel_dominant_fraction = parse_double(k, v); }},
        {"channel_decay_db_per_tap", [](SimConfig& c, auto& k, auto& v) { c.channel_decay_db_per_tap = parse_double(k, v); }},
        {"tx_irr_db", [](SimConfig& c, auto& k, auto& v) { c.tx_irr_db = parse_double(k, v); }},
        {"pa_gain_db", [](SimConfig& c, auto& k, auto& v) { c.pa_gain_db = parse_double(k, v); }},
        {"pa_iip3_dbm", [](SimConfig& c, auto& k, auto& v) { c.pa_iip3_dbm = parse_double(k, v); }},
        {"lna_gain_db", [](SimConfig& c, auto& k, auto& v) { c.lna_gain_db = parse_double(k, v); }},
        {"lna_iip3_dbm", [](SimConfig& c, auto& k, auto& v) { c.lna_iip3_dbm = parse_double(k, v); }},
        {"mixer_gain_db", [](SimConfig& c, auto& k, auto& v) { c.mixer_gain_db = parse_double(k, v); }},
        {"mixer_iip2_dbm", [](SimConfig& c, auto& k, auto& v) { c.mixer_iip2_dbm = parse_double(k, v); }},
        {"mixer_iip3_dbm", [](SimConfig& c, auto& k, auto& v) { c.mixer_iip3_dbm = parse_double(k, v); }},
        {"vga_gain_min_db", [](SimConfig& c, auto& k, auto& v) { c.vga_gain_min_db = parse_double(k, v); }},
        {"vga_gain_max_db", [](SimConfig& c, auto& k, auto& v) { c.vga_gain_max_db = parse_double(k, v); }},
        {"vga_iip2_dbm", [](SimConfig& c, auto& k, auto& v) { c.vga_iip2_dbm = parse_double(k, v); }},
        {"vga_iip3_dbm", [](SimConfig& c, auto& k, auto& v) { c.vga_iip3_dbm = parse_double(k, v); }},
        {"rx_irr_db", [](SimConfig& c, auto& k, auto& v) { c.rx_irr_db = parse_double(k, v); }},
        {"rx_nf_db", [](SimConfig& c, auto& k, auto& v) { c.rx_nf_db = parse_double(k, v); }},
        {"adc_bits", [](SimConfig& c, auto& k, auto& v) { c.adc_bits = parse_int(k, v); }},
        {"adc_headroom_db", [](SimConfig& c, auto& k, auto& v) { c.adc_headroom_db = parse_double(k, v); }},
        {"tx_iq_enabled", [](SimConfig& c, auto& k, auto& v) { c.tx_iq_enabled = parse_bool(k, v); }},
        {"tx_nonlin_enabled", [](SimConfig& c, auto& k, auto& v) { c.tx_nonlin_enabled = parse_bool(k, v); }},
        {"rx_iq_enabled", [](SimConfig& c, auto& k, auto& v) { c.rx_iq_enabled = parse_bool(k, v); }},
        {"rx_nonlin_enabled", [](SimConfig& c, auto& k, auto& v) { c.rx_nonlin_enabled = parse_bool(k, v); }},
        {"noise_enabled", [](SimConfig& c, auto& k, auto& v) { c.noise_enabled = parse_bool(k, v); }},
        {"adc_enabled", [](SimConfig& c, auto& k, auto& v) { c.adc_enabled = parse_bool(k, v); }},
        {"mode", [](SimConfig& c, auto& k, auto& v) { c.mode = parse_mode(k, v); }},
        {"seed", [](SimConfig& c, auto& k, auto& v) { c.seed = parse_u64(k, v); }},
        {"trials", [](SimConfig& c, auto& k, auto& v) { c.trials = parse_int(k, v); }},
        {"parallel", [](SimConfig& c, auto& k, auto& v) { c.parallel = parse_int(k, v); }},
        {"ratio_nc_values", [](SimConfig& c, auto& k, auto& v) { c.ratio_nc_values = parse_int_list(k, v); }},
        {"ratio_search_cap", [](SimConfig& c, auto& k, auto& v) { c.ratio_search_cap = parse_double(k, v); }},
        {"rate_n_values", [](SimConfig& c, auto& k, auto& v) { c.rate_n_values = parse_int_list(k, v); }},
        {"rate_tcoh_min_s", [](SimConfig& c, auto& k, auto& v) { c.rate_tcoh_min_s = parse_double(k, v); }},
        {"rate_tcoh_max_s", [](SimConfig& c, auto& k, auto& v) { c.rate_tcoh_max_s = parse_double(k, v); }},
        {"rate_tcoh_points", [](SimConfig& c, auto& k, auto& v) { c.rate_tcoh_points = parse_int(k, v); }},
        {"crlb_m", [](SimConfig& c, auto& k, auto& v) { c.crlb_m = parse_int(k, v); }},
        {"crlb_trials", [](SimConfig& c, auto& k, auto& v) { c.crlb_trials = parse_int(k, v); }},
        {"crlb_n_values", [](SimConfig& c, auto& k, auto& v) { c.crlb_n_values = parse_int_list(k, v); }},
        {"trial_n", [](SimConfig& c, auto& k, auto& v) { c.trial_n = parse_int(k, v); }},
        {"trial_with_soi", [](SimConfig& c, auto& k, auto& v) { c.trial_with_soi = parse_bool(k, v); }},
        {"measure_symbols", [](SimConfig& c, auto& k, auto& v) { c.measure_symbols = parse_int(k, v); }},
        {"sinr_match_tol_db", [](SimConfig& c, auto& k, auto& v) { c.sinr_match_tol_db = parse_double(k, v); }},
        {"ladder_spacing", [](SimConfig& c, auto& k, auto& v) { c.ladder_spacing = parse_double(k, v); }},
        {"soi_timing_random", [](SimConfig& c, auto& k, auto& v) { c.soi_timing_random = parse_bool(k, v); }},
    };
    return table;
}

}  // namespace

double SimConfig::noise_floor_dbm() const {
    return -174.0 + 10.0 * std::log10(bandwidth_hz) + rx_nf_db;
}

double SimConfig::snr_db() const { return soi_power_dbm - noise_floor_dbm(); }

double SimConfig::snr_linear() const { return std::pow(10.0, snr_db() / 10.0); }

int SimConfig::est_decimation() const {
    return estimation_rate == EstimationRate::kSymbol ? oversampling : 1;
}

double SimConfig::est_rate_hz() const { return sample_rate_hz / est_decimation(); }

int SimConfig::est_samples_per_symbol() const {
    return (n_subcarriers + cp_len) * oversampling / est_decimation();
}

waveform::OfdmParams SimConfig::ofdm_params() const {
    waveform::OfdmParams p;
    p.n_subcarriers = n_subcarriers;
    p.cp_len = cp_len;
    p.constellation = waveform::Constellation::kQam16;
    p.oversampling = oversampling;
    p.bandwidth_hz = bandwidth_hz;
    p.sample_rate_hz = sample_rate_hz;
    return p;
}

channel::SiChannelParams SimConfig::channel_params() const {
    channel::SiChannelParams p;
    p.n_tx = n_tx;
    p.n_rx = n_rx;
    p.n_taps = channel_len_m;
    p.tap_spacing = est_decimation();
    p.separation_db = antenna_separation_db;
    p.dominant_fraction = channel_dominant_fraction;
    p.decay_db_per_tap = channel_decay_db_per_tap;
    return p;
}

rf::TxChainParams SimConfig::tx_params() const {
    rf::TxChainParams p;
    p.iq.irr_db = tx_irr_db;
    p.pa.gain_db = pa_gain_db;
    p.pa.iip3_dbm = pa_iip3_dbm;
    p.tx_power_dbm = tx_power_dbm;
    p.iq_enabled = tx_iq_enabled;
    p.nonlin_enabled = tx_nonlin_enabled;
    return p;
}

rf::RxChainParams SimConfig::rx_params() const {
    rf::RxChainParams p;
    p.lna.gain_db = lna_gain_db;
    p.lna.iip3_dbm = lna_iip3_dbm;
    p.mixer.gain_db = mixer_gain_db;
    p.mixer.iip2_dbm = mixer_iip2_dbm;
    p.mixer.iip3_dbm = mixer_iip3_dbm;
    p.vga.iip2_dbm = vga_iip2_dbm;
    p.vga.iip3_dbm = vga_iip3_dbm;
    p.vga_min_db = vga_gain_min_db;
    p.vga_max_db = vga_gain_max_db;
    p.iq.irr_db = rx_irr_db;
    p.adc.bits = adc_bits;
    p.adc.papr_headroom_db = adc_headroom_db;
    p.nf_db = rx_nf_db;
    p.bandwidth_hz = bandwidth_hz;
    p.iq_enabled = rx_iq_enabled;
    p.nonlin_enabled = rx_nonlin_enabled;
    p.noise_enabled = noise_enabled;
    p.adc_enabled = adc_enabled;
    return p;
}

void SimConfig::validate() const {
    if (n_subcarriers < 4 || n_subcarriers % 2 != 0)
        throw ConfigError("n_subcarriers must be an even number of at least 4");
    if (cp_len < 0) throw ConfigError("cp_len must be non-negative");
    if (constellation != "qam16")
        throw ConfigError("unsupported constellation '" + constellation + "'");
    if (oversampling < 1) throw ConfigError("oversampling must be at least 1");
    if (bandwidth_hz <= 0.0 || sample_rate_hz <= 0.0)
        throw ConfigError("bandwidth_hz and sample_rate_hz must be positive");
    if (n_tx < 1 || n_rx < 1) throw ConfigError("n_tx and n_rx must be at least 1");
    if (channel_len_m < 1) throw ConfigError("channel_len_m must be at least 1");
    if (channel_dominant_fraction < 0.0 || channel_dominant_fraction > 1.0)
        throw ConfigError("channel_dominant_fraction must lie in [0, 1]");
    if (adc_bits < 1 || adc_bits > 24) throw ConfigError("adc_bits must lie in [1, 24]");
    if (vga_gain_min_db > vga_gain_max_db)
        throw ConfigError("vga_gain_min_db must not exceed vga_gain_max_db");
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (parallel < 1) throw ConfigError("parallel must be at least 1");
    if (ratio_search_cap <= 1.0) throw ConfigError("ratio_search_cap must exceed 1");
    if (rate_tcoh_min_s <= 0.0 || rate_tcoh_max_s < rate_tcoh_min_s)
        throw ConfigError("rate_tcoh bounds must satisfy 0 < min <= max");
    if (rate_tcoh_points < 2) throw ConfigError("rate_tcoh_points must be at least 2");
    if (crlb_m < 1) throw ConfigError("crlb_m must be at least 1");
    if (crlb_trials < 10) throw ConfigError("crlb_trials must be at least 10");
    if (trial_n <= channel_len_m) throw ConfigError("trial_n must exceed channel_len_m");
    if (measure_symbols < 1) throw ConfigError("measure_symbols must be at least 1");
    if (sinr_match_tol_db <= 0.0) throw ConfigError("sinr_match_tol_db must be positive");
    if (ladder_spacing <= 1.0) throw ConfigError("ladder_spacing must exceed 1");
    for (int nc : ratio_nc_values)
        if (nc <= channel_len_m) throw ConfigError("ratio_nc_values must exceed channel_len_m");
    for (int n : rate_n_values)
        if (n <= channel_len_m) throw ConfigError("rate_n_values must exceed channel_len_m");
    for (int n : crlb_n_values)
        if (n <= crlb_m) throw ConfigError("crlb_n_values must exceed crlb_m");
}

std::string SimConfig::serialize() const {
    std::string s;
    auto kv = [&s](const std::string& k, const std::string& v) { s += k + " = " + v + "\n"; };
    s += "# waveform\n";
    kv("n_subcarriers", std::to_string(n_subcarriers));
    kv("cp_len", std::to_string(cp_len));
    kv("constellation", constellation);
    kv("oversampling", std::to_string(oversampling));
    kv("bandwidth_hz", fmt(bandwidth_hz));
    kv("sample_rate_hz", fmt(sample_rate_hz));
    kv("estimation_rate", to_string(estimation_rate));
    s += "\n# link budget\n";
    kv("tx_power_dbm", fmt(tx_power_dbm));
    kv("antenna_separation_db", fmt(antenna_separation_db));
    kv("rf_cancellation_db", fmt(rf_cancellation_db));
    kv("soi_power_dbm", fmt(soi_power_dbm));
    s += "\n# self-interference channel\n";
    kv("n_tx", std::to_string(n_tx));
    kv("n_rx", std::to_string(n_rx));
    kv("channel_len_m", std::to_string(channel_len_m));
    kv("channel_dominant_fraction", fmt(channel_dominant_fraction));
    kv("channel_decay_db_per_tap", fmt(channel_decay_db_per_tap));
    s += "\n# transmitter impairments\n";
    kv("tx_irr_db", fmt(tx_irr_db));
    kv("pa_gain_db", fmt(pa_gain_db));
    kv("pa_iip3_dbm", fmt(pa_iip3_dbm));
    s += "\n# receiver impairments\n";
    kv("lna_gain_db", fmt(lna_gain_db));
    kv("lna_iip3_dbm", fmt(lna_iip3_dbm));
    kv("mixer_gain_db", fmt(mixer_gain_db));
    kv("mixer_iip2_dbm", fmt(mixer_iip2_dbm));
    kv("mixer_iip3_dbm", fmt(mixer_iip3_dbm));
    kv("vga_gain_min_db", fmt(vga_gain_min_db));
    kv("vga_gain_max_db", fmt(vga_gain_max_db));
    kv("vga_iip2_dbm", fmt(vga_iip2_dbm));
    kv("vga_iip3_dbm", fmt(vga_iip3_dbm));
    kv("rx_irr_db", fmt(rx_irr_db));
    kv("rx_nf_db", fmt(rx_nf_db));
    kv("adc_bits", std::to_string(adc_bits));
    kv("adc_headroom_db", fmt(adc_headroom_db));
    s += "\n# impairment switches\n";
    kv("tx_iq_enabled", tx_iq_enabled ? "true" : "false");
    kv("tx_nonlin_enabled", tx_nonlin_enabled ? "true" : "false");
    kv("rx_iq_enabled", rx_iq_enabled ? "true" : "false");
    kv("rx_nonlin_enabled", rx_nonlin_enabled ? "true" : "false");
    kv("noise_enabled", noise_enabled ? "true" : "false");
    kv("adc_enabled", adc_enabled ? "true" : "false");
    s += "\n# harness\n";
    kv("mode", to_string(mode));
    kv("seed", std::to_string(seed));
    kv("trials", std::to_string(trials));
    kv("parallel", std::to_string(parallel));
    s += "\n# experiment grids\n";
    kv("ratio_nc_values", fmt(ratio_nc_values));
    kv("ratio_search_cap", fmt(ratio_search_cap));
    kv("rate_n_values", fmt(rate_n_values));
    kv("rate_tcoh_min_s", fmt(rate_tcoh_min_s));
    kv("rate_tcoh_max_s", fmt(rate_tcoh_max_s));
    kv("rate_tcoh_points", std::to_string(rate_tcoh_points));
    kv("crlb_m", std::to_string(crlb_m));
    kv("crlb_trials", std::to_string(crlb_trials));
    kv("crlb_n_values", fmt(crlb_n_values));
    kv("trial_n", std::to_string(trial_n));
    kv("trial_with_soi", trial_with_soi ? "true" : "false");
    s += "\n# measurement controls\n";
    kv("measure_symbols", std::to_string(measure_symbols));
    kv("sinr_match_tol_db", fmt(sinr_match_tol_db));
    kv("ladder_spacing", fmt(ladder_spacing));
    kv("soi_timing_random", soi_timing_random ? "true" : "false");
    return s;
}

std::uint64_t SimConfig::hash() const {
    const std::string s = serialize();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

SimConfig parse_config(const std::string& text) {
    SimConfig cfg;
    std::set<std::string> seen;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end())
            throw ConfigError("unknown config key '" + key + "' on line " +
                              std::to_string(lineno));
        if (!seen.insert(key).second)
            throw ConfigError("duplicate config key '" + key + "' on line " +
                              std::to_string(lineno));
        it->second(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_string(Mode mode) { return mode == Mode::kLinear ? "linear" : "wl"; }

std::string to_string(EstimationRate rate) {
    return rate == EstimationRate::kSymbol ? "symbol" : "oversampled";
}

}  // namespace fdx
