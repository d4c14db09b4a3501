#include "rainbow/serialize.hpp"

#include "rainbow/errors.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>

namespace rainbow {

namespace {

double label_of(int index, int sites) { return site_label(index, sites / 2); }

json log_coupling(const LogCoupling& J) {
    return {{"sign", J.sign}, {"log_magnitude", J.log_magnitude}, {"value", J.value()}};
}

template <class T>
void put_le(std::ostream& os, T value) {
    static_assert(std::endian::native == std::endian::little, "little-endian host expected");
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
    T value{};
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!is)
        throw std::runtime_error("truncated orbital file");
    return value;
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

json to_json(const CouplingProfile& profile) {
    json j;
    j["L"] = profile.L;
    j["alpha"] = profile.alpha;
    j["h"] = profile.h;
    j["z"] = profile.z;
    j["couplings"] = profile.couplings;
    return j;
}

CouplingProfile profile_from_json(const json& j) {
    CouplingProfile p;
    p.L = j.at("L").get<int>();
    p.alpha = j.at("alpha").get<double>();
    p.h = j.at("h").get<double>();
    p.z = j.at("z").get<double>();
    p.couplings = j.at("couplings").get<std::vector<double>>();
    if (static_cast<int>(p.couplings.size()) != 2 * p.L - 1)
        throw ContractViolation("profile JSON must carry 2L-1 couplings");
    p.smallest_coupling = *std::min_element(p.couplings.begin(), p.couplings.end());
    p.underflow_warning = p.smallest_coupling < 1e-280;
    return p;
}

json to_json(const Lattice2D& lattice) {
    json j;
    j["L"] = lattice.L;
    j["alpha"] = lattice.alpha;
    json links = json::array();
    for (const auto& link : lattice.links)
        links.push_back(json::array({link.a, link.b, link.amplitude}));
    j["links"] = std::move(links);
    return j;
}

json to_json(const BondList& bonds, int sites) {
    json j;
    j["sites"] = sites;
    json list = json::array();
    for (const auto& b : bonds.bonds)
        list.push_back({{"left", label_of(b.left, sites)},
                        {"right", label_of(b.right, sites)},
                        {"sign", b.sign}});
    j["bonds"] = std::move(list);
    json trace = json::array();
    for (const auto& step : bonds.trace) {
        json s;
        s["step"] = step.step;
        s["link"] = {label_of(step.left, sites), label_of(step.right, sites)};
        s["coupling"] = log_coupling(step.decimated);
        s["created"] = step.created;
        if (step.created) {
            s["new_link"] = {label_of(step.new_left, sites), label_of(step.new_right, sites)};
            s["effective"] = log_coupling(step.effective);
        }
        trace.push_back(std::move(s));
    }
    j["trace"] = std::move(trace);
    return j;
}

json to_json(const FitResult& fit) {
    json j;
    j["model"] = fit.model;
    json coeffs = json::object();
    for (std::size_t k = 0; k < fit.names.size(); ++k)
        coeffs[fit.names[k]] = fit.coefficients[static_cast<Eigen::Index>(k)];
    j["coeffs"] = std::move(coeffs);
    j["chi2"] = fit.chi2;
    j["dof"] = fit.dof;
    j["condition"] = fit.condition;
    return j;
}

void write_comment_header(std::ostream& os, const std::vector<std::string>& lines) {
    for (const auto& line : lines)
        os << "# " << line << '\n';
}

void write_spectrum_csv(std::ostream& os, const SpectrumResult& spectrum) {
    os << "m,energy\n";
    for (int k = 0; k < spectrum.dim(); ++k)
        os << k - spectrum.dim() / 2 << ',' << format_double(spectrum.energies[k]) << '\n';
}

void write_orbitals_binary(std::ostream& os, const Eigen::MatrixXd& orbitals) {
    put_le<std::int64_t>(os, orbitals.rows());
    put_le<std::int64_t>(os, orbitals.cols());
    for (Eigen::Index c = 0; c < orbitals.cols(); ++c)
        for (Eigen::Index r = 0; r < orbitals.rows(); ++r)
            put_le<double>(os, orbitals(r, c));
}

Eigen::MatrixXd read_orbitals_binary(std::istream& is) {
    const auto rows = get_le<std::int64_t>(is);
    const auto cols = get_le<std::int64_t>(is);
    if (rows < 0 || cols < 0)
        throw std::runtime_error("corrupt orbital file header");
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            M(r, c) = get_le<double>(is);
    return M;
}

void write_entropy_csv(std::ostream& os, const EntropyCurve& curve, const std::string& length_name,
                       const std::string& param_name) {
    os << length_name << ',' << param_name << ",n,S\n";
    for (const auto& p : curve)
        os << p.length << ',' << format_double(p.param) << ',' << format_double(p.order) << ','
           << format_double(p.entropy) << '\n';
}

void write_entanglement_spectrum_csv(std::ostream& os, const EntanglementSpectrum& es) {
    // p runs over half-odd integers for an even number of levels, integers
    // otherwise, centred on zero
    os << "p,nu,eps\n";
    const std::size_t n = es.eps.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double p = static_cast<double>(k) - (static_cast<double>(n) - 1.0) / 2.0;
        os << format_double(p) << ',' << format_double(es.nu[k]) << ',' << format_double(es.eps[k])
           << '\n';
    }
}

void write_amplitudes_csv(std::ostream& os, const AmplitudeTable& amps) {
    os << "bitstring,amplitude\n";
    for (std::uint32_t c = 0; c < amps.size(); ++c)
        if (std::popcount(c) == amps.filling)
            os << amps.bitstring(c) << ',' << format_double(amps.amplitudes[c]) << '\n';
}

void write_validity_csv(std::ostream& os, const ValidityMap& map) {
    os << "L,z,overlap\n";
    for (const auto& p : map.grid)
        os << p.L << ',' << format_double(p.z) << ',' << format_double(p.overlap) << '\n';
}

void write_contour_csv(std::ostream& os, const ValidityMap& map) {
    os << "L,z_at_0.90,z_at_0.95\n";
    for (const auto& c : map.contours)
        os << c.L << ',' << format_double(c.z_at_090) << ',' << format_double(c.z_at_095) << '\n';
}

std::string render_arcs(const BondList& bonds, int sites) {
    constexpr int width = 3;
    std::vector<Bond> sorted = bonds.bonds;
    std::sort(sorted.begin(), sorted.end(), [](const Bond& a, const Bond& b) {
        return (a.right - a.left) > (b.right - b.left);
    });
    std::string out;
    const std::size_t line_len = static_cast<std::size_t>(sites * width);
    for (const auto& b : sorted) {
        std::string line(line_len, ' ');
        const std::size_t from = static_cast<std::size_t>(b.left * width + 1);
        const std::size_t to = static_cast<std::size_t>(b.right * width + 1);
        for (std::size_t c = from; c <= to; ++c)
            line[c] = '-';
        line[from] = '+';
        line[to] = '+';
        out += line + (b.sign > 0 ? "  (+)\n" : "  (-)\n");
    }
    out += std::string(line_len, ' ');
    for (int s = 0; s < sites; ++s)
        out[out.size() - line_len + static_cast<std::size_t>(s * width + 1)] = 'o';
    out += '\n';
    return out;
}

} // namespace rainbow
