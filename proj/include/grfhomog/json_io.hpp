#pragma once

#include <string>

#include <json.hpp>

#include "grfhomog/brf.hpp"
#include "grfhomog/catalog.hpp"
#include "grfhomog/flow.hpp"
#include "grfhomog/forms.hpp"
#include "grfhomog/lie_algebra.hpp"

namespace grfhomog {

// "p/q" fraction strings or plain JSON numbers.
double parse_fraction(const nlohmann::json& value);

// {"dim": n, "C": [[[...]]], "labels": [...]} with dense n x n x n constants.
LieAlgebra lie_algebra_from_json(const nlohmann::json& j);
nlohmann::json lie_algebra_to_json(const LieAlgebra& l);

// {"degree": k, "terms": [{"idx": [i,j,...], "val": x}]} with 1-based
// strictly increasing indices.
AltForm alt_form_from_json(const nlohmann::json& j, int n);
nlohmann::json alt_form_to_json(const AltForm& a);

Mat matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const Mat& m);

KobayashiData kobayashi_data_from_json(const nlohmann::json& j);

// %.17g, for round-trip-exact report emission.
std::string fmt_double(double x);

// Hand-assembled JSON documents (all carry "schema": 1 and 17-significant-
// digit floats).
std::string solve_report_json(const SolveReport& report, const Chart& chart);
std::string multistart_report_json(const std::vector<SolveReport>& reports, const Chart& chart);
std::string stability_json(const JacobianReport& report, const Eigen::Vector3d& fixed_point,
                           int p, int q, double lambda);
std::string kobayashi_report_json(const KobayashiReport& report);
std::string catalog_space_json(const MpqSpace& space);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace grfhomog
