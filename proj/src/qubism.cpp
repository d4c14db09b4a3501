#include "rainbow/qubism.hpp"

#include "rainbow/errors.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <string>

namespace rainbow {

double AmplitudeTable::norm_squared() const {
    double s = 0.0;
    for (double a : amplitudes)
        s += a * a;
    return s;
}

int AmplitudeTable::nonzero_count(double threshold) const {
    int count = 0;
    for (double a : amplitudes)
        count += std::abs(a) > threshold;
    return count;
}

std::string AmplitudeTable::bitstring(std::uint32_t config) const {
    std::string s(n_sites, '0');
    for (int i = 0; i < n_sites; ++i)
        if (config >> (n_sites - 1 - i) & 1u)
            s[i] = '1';
    return s;
}

AmplitudeTable slater_amplitudes(const Eigen::MatrixXd& occupied, int n_sites) {
    if (n_sites > kMaxAmplitudeSites)
        throw ResourceError("amplitude tables are limited to " + std::to_string(kMaxAmplitudeSites) +
                            " sites, got " + std::to_string(n_sites));
    if (occupied.rows() != n_sites)
        throw ContractViolation("orbital matrix rows must equal the site count");
    const int filling = static_cast<int>(occupied.cols());

    AmplitudeTable table;
    table.n_sites = n_sites;
    table.filling = filling;
    table.amplitudes.assign(std::size_t{1} << n_sites, 0.0);

    Eigen::MatrixXd sub(filling, filling);
    for (std::uint32_t config = 0; config < table.size(); ++config) {
        if (std::popcount(config) != filling)
            continue;
        int r = 0;
        for (int site = 0; site < n_sites; ++site)
            if (config >> (n_sites - 1 - site) & 1u)
                sub.row(r++) = occupied.row(site);
        table.amplitudes[config] = filling == 0 ? 1.0 : sub.partialPivLu().determinant();
    }
    return table;
}

QubismCell qubism_cell(std::uint32_t config, int n_sites) {
    QubismCell cell{0, 0};
    for (int depth = 0; depth < n_sites / 2; ++depth) {
        const int first = n_sites - 1 - 2 * depth; // bit of site 2*depth
        cell.row = cell.row << 1 | static_cast<int>(config >> first & 1u);
        cell.col = cell.col << 1 | static_cast<int>(config >> (first - 1) & 1u);
    }
    return cell;
}

int QubismImage::nonzero_count(double threshold) const {
    int count = 0;
    for (double p : pixels)
        count += std::abs(p) > threshold;
    return count;
}

QubismImage render(const AmplitudeTable& amps) {
    if (amps.n_sites % 2 != 0)
        throw DomainError("qubism needs an even number of sites, got " + std::to_string(amps.n_sites));
    QubismImage image;
    image.side = 1 << (amps.n_sites / 2);
    image.pixels.assign(static_cast<std::size_t>(image.side) * image.side, 0.0);
    for (std::uint32_t config = 0; config < amps.size(); ++config) {
        const auto cell = qubism_cell(config, amps.n_sites);
        image.pixels[static_cast<std::size_t>(cell.row) * image.side + cell.col] = amps.amplitudes[config];
    }
    return image;
}

Eigen::VectorXd schmidt_spectrum(const AmplitudeTable& amps, int cut) {
    const int N = amps.n_sites;
    if (cut <= 0 || cut >= N)
        throw DomainError("cut must lie strictly inside the chain");
    const int rows = 1 << cut;
    const int cols = 1 << (N - cut);
    Eigen::MatrixXd M(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            M(r, c) = amps.amplitudes[static_cast<std::size_t>(r) << (N - cut) | c];
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues();
    return s.array().square();
}

int schmidt_rank(const AmplitudeTable& amps, int l) {
    const Eigen::VectorXd p = schmidt_spectrum(amps, l);
    const double top = std::sqrt(p.maxCoeff());
    int rank = 0;
    for (int i = 0; i < p.size(); ++i)
        rank += std::sqrt(p[i]) > 1e-10 * top;
    return rank;
}

std::string ppm_bytes(const QubismImage& image) {
    double top = 0.0;
    for (double p : image.pixels)
        top = std::max(top, std::abs(p));
    std::string out = "P6\n" + std::to_string(image.side) + " " + std::to_string(image.side) + "\n255\n";
    out.reserve(out.size() + 3 * image.pixels.size());
    for (double p : image.pixels) {
        const auto level =
            top > 0.0 ? static_cast<unsigned char>(std::lround(255.0 * std::abs(p) / top)) : 0;
        out.push_back(static_cast<char>(p > 0 ? level : 0));
        out.push_back(static_cast<char>(p < 0 ? level : 0));
        out.push_back('\0');
    }
    return out;
}

void write_ppm(const QubismImage& image, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open " + path + " for writing");
    const auto bytes = ppm_bytes(image);
    file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!file)
        throw std::runtime_error("failed writing " + path);
}

int lit_pixel_count(const std::string& ppm) {
    if (ppm.rfind("P6\n", 0) != 0)
        throw ContractViolation("not a P6 buffer");
    // header is three newline-terminated lines
    std::size_t pos = 0;
    for (int line = 0; line < 3; ++line) {
        pos = ppm.find('\n', pos);
        if (pos == std::string::npos)
            throw ContractViolation("not a P6 buffer");
        ++pos;
    }
    int lit = 0;
    for (std::size_t i = pos; i + 2 < ppm.size(); i += 3)
        lit += ppm[i] != 0 || ppm[i + 1] != 0 || ppm[i + 2] != 0;
    return lit;
}

} // namespace rainbow
