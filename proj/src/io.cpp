#include "tt/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tt {

namespace {

// %.17g keeps the full double round-trip precision the format requires.
std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_tt_json(const TensorTrain& tt, std::ostream& os) {
    os << "{\n  \"version\": 1,\n  \"phys_dims\": [";
    std::vector<Index> pd = tt.phys_dims();
    for (std::size_t i = 0; i < pd.size(); ++i) os << (i ? ", " : "") << pd[i];
    os << "],\n  \"bond_dims\": [";
    std::vector<Index> bd = tt.bond_dims();
    for (std::size_t i = 0; i < bd.size(); ++i) os << (i ? ", " : "") << bd[i];
    os << "],\n  \"cores\": [\n";
    for (Index j = 0; j < tt.order(); ++j) {
        const Core& c = tt.core(j);
        os << "    [";
        for (Index t = 0; t < c.data.size(); ++t)
            os << (t ? ", " : "") << fmt_double(c.data[t]);
        os << "]" << (j + 1 < tt.order() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
}

void write_tt_json_file(const TensorTrain& tt, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_tt_json_file: cannot open " + path);
    write_tt_json(tt, os);
}

TensorTrain read_tt_json(std::istream& is) {
    nlohmann::json j = nlohmann::json::parse(is);
    if (!j.contains("version") || j["version"].get<int>() != 1)
        throw std::runtime_error("read_tt_json: unsupported version");
    std::vector<Index> pd = j.at("phys_dims").get<std::vector<Index>>();
    std::vector<Index> bd = j.at("bond_dims").get<std::vector<Index>>();
    const auto& cores_j = j.at("cores");
    if (cores_j.size() != pd.size() || bd.size() + 1 != pd.size())
        throw std::runtime_error("read_tt_json: inconsistent dimensions");
    std::vector<Core> cores;
    for (std::size_t t = 0; t < pd.size(); ++t) {
        Index left = t == 0 ? 1 : bd[t - 1];
        Index right = t + 1 == pd.size() ? 1 : bd[t];
        Core c(left, pd[t], right);
        std::vector<double> vals = cores_j[t].get<std::vector<double>>();
        if (static_cast<Index>(vals.size()) != c.data.size())
            throw std::runtime_error("read_tt_json: core value count mismatch");
        for (Index i = 0; i < c.data.size(); ++i) c.data[i] = vals[static_cast<std::size_t>(i)];
        cores.push_back(std::move(c));
    }
    return TensorTrain(std::move(cores));
}

TensorTrain read_tt_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_tt_json_file: cannot open " + path);
    return read_tt_json(is);
}

} // namespace tt
