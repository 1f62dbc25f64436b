#include "fdlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fdlab {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("CSV row width does not match the header");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path + " for checksumming");
    std::uint64_t hash = 14695981039346656037ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ull;
        }
    }
    return hash;
}

nlohmann::json profile_to_json(const SimilarityProfile& profile) {
    nlohmann::json j;
    j["equation"] = profile.model.kind_name();
    j["exponent"] = profile.model.exponent;
    j["variant"] = profile.variant.name();
    j["beta"] = profile.beta;
    j["plateau"] = profile.plateau();
    if (profile.model.is_p_laplace()) j["lambda"] = profile.lambda;
    j["blowup_constant"] = profile.blowup_const;
    j["decay_exponent"] = profile.decay_exp;
    j["predicted_tail"] = profile.predicted_tail;
    j["matched_tail"] = profile.matched_tail;
    if (std::isfinite(profile.tail_match_xi)) j["tail_match_xi"] = profile.tail_match_xi;
    if (profile.variant.is_perturbed() && !profile.model.is_p_laplace())
        j["eta_eps"] = profile.eta_eps;
    j["n_points"] = profile.xi_grid.size();
    j["xi_range"] = {profile.xi_min(), profile.xi_max()};
    return j;
}

nlohmann::json field_to_json(const RadialField& field) {
    nlohmann::json j;
    j["domain"] = field.domain.shape_name();
    j["dimension"] = field.domain.dimension();
    j["inner_radius"] = field.domain.inner_radius();
    j["outer_radius"] = field.domain.outer_radius();
    if (field.time) j["time"] = *field.time;
    j["n_points"] = field.r_grid.size();
    j["r_range"] = {field.r_grid.front(), field.r_grid.back()};
    return j;
}

nlohmann::json report_to_json(const VerificationReport& report) {
    nlohmann::json j;
    j["divergent"] = report.divergent;
    j["theta_expected"] = report.theta_expected;
    j["theta_fitted"] = report.theta_fitted;
    j["c_constant"] = report.c_constant;
    j["tail_fraction"] = report.tail_fraction;
    if (report.divergent) {
        j["predicted"] = "divergent";
    } else {
        j["predicted"] = report.predicted;
        j["L_hat"] = report.fitted_limit;
        j["relative_error"] = report.relative_error;
    }
    auto& rows = j["per_time"] = nlohmann::json::array();
    for (const PerTimeRow& row : report.per_time)
        rows.push_back({{"t", row.t}, {"integral", row.integral}, {"scaled", row.scaled}});
    return j;
}

void write_manifest(const std::string& dir, const nlohmann::json& config,
                    const std::vector<std::string>& files, double wall_seconds) {
    nlohmann::json j;
    j["config"] = config;
    j["wall_seconds"] = wall_seconds;
    auto& list = j["files"] = nlohmann::json::array();
    for (const std::string& name : files) {
        char hex[20];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(fnv1a64_file(dir + "/" + name)));
        list.push_back({{"name", name}, {"fnv1a64", hex}});
    }
    std::ofstream out(dir + "/manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest in " + dir);
    out << j.dump(2) << "\n";
}

}  // namespace fdlab
