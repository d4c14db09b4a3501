#pragma once

#include "rainbow/continuum.hpp"
#include "rainbow/entanglement.hpp"
#include "rainbow/fitting.hpp"
#include "rainbow/lattice.hpp"
#include "rainbow/qubism.hpp"
#include "rainbow/sdrg.hpp"
#include "rainbow/spectra.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace rainbow {

using json = nlohmann::ordered_json;

json to_json(const CouplingProfile& profile);
json to_json(const Lattice2D& lattice);
json to_json(const BondList& bonds, int sites);
json to_json(const FitResult& fit);

/// Inverse of to_json for profiles; couplings are taken verbatim.
CouplingProfile profile_from_json(const json& j);

/// Shortest decimal that round-trips the double.
std::string format_double(double v);

/// '#'-prefixed header lines, one per entry.
void write_comment_header(std::ostream& os, const std::vector<std::string>& lines);

/// (m, energy) per level, m relative to the Fermi point.
void write_spectrum_csv(std::ostream& os, const SpectrumResult& spectrum);

/// Little-endian float64 orbital dump: int64 rows, int64 cols, then the
/// entries in column-major order.
void write_orbitals_binary(std::ostream& os, const Eigen::MatrixXd& orbitals);
Eigen::MatrixXd read_orbitals_binary(std::istream& is);

void write_entropy_csv(std::ostream& os, const EntropyCurve& curve, const std::string& length_name,
                       const std::string& param_name);
void write_entanglement_spectrum_csv(std::ostream& os, const EntanglementSpectrum& es);
void write_amplitudes_csv(std::ostream& os, const AmplitudeTable& amps);
void write_validity_csv(std::ostream& os, const ValidityMap& map);
void write_contour_csv(std::ostream& os, const ValidityMap& map);

/// ASCII arc diagram of a bond list over `sites` sites, outermost arc on top.
std::string render_arcs(const BondList& bonds, int sites);

} // namespace rainbow
