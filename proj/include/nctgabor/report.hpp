#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "nctgabor/config.hpp"
#include "nctgabor/geometry.hpp"

namespace nct {

inline constexpr const char* kLibraryVersion = "0.4.0";

using json = nlohmann::ordered_json;

json to_json(cplx z);
json to_json(const TorusParams& p);
json to_json(const GridSpec& g);
json to_json(const Tolerances& t);
json to_json(const WindowSpec& w);
json to_json(const ExperimentConfig& c);
json to_json(const FrameBounds& b);
json to_json(const ChernReport& r);

// alpha,beta,r,s,q,A,B,c1_re,c1_im,energy,gap,sd_plus,sd_minus,W_residual,radius,N,L
std::string csv_header();
std::string csv_row(const ChernReport& r);
// Continuous results share the schema; lattice-only columns are left empty.
std::string csv_row_continuous(int q, cplx c1, double energy, const GridSpec& grid);

void write_text(const std::string& path, const std::string& content);
// Whitespace-separated columns with a '#' header line.
void write_columns(const std::string& path, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& rows);
// t1 t2 |F| rows of a sampled Laurent symbol.
void write_symbol_heatmap(const std::string& path, const LaurentSymbol& s);

}  // namespace nct
