#pragma once

#include "lleekit/bisim.hpp"
#include "lleekit/chart.hpp"
#include "lleekit/lee.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace lleekit {

// Line formats. Every reader throws FormatError with a 1-based line number.
//
//   chart v1        witness v1            map v1       solution v1
//   init x          x a y 1               x X          x (a+b)*0
//   x a y           y b ! is not listed   y X
//   y b !
//   node z          (isolated nodes)

Chart read_chart(std::string_view text);
std::string write_chart(const Chart& g);

Witness read_witness(std::string_view text, const Chart& g);
std::string write_witness(const Witness& w);

BisimMap read_map(std::string_view text, const Chart& source, const Chart& target);
std::string write_map(const BisimMap& theta);

struct Solution;
Solution read_solution(std::string_view text, const Chart& g);
std::string write_solution(const Solution& s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

nlohmann::json chart_to_json(const Chart& g);
Chart chart_from_json(const nlohmann::json& j);
nlohmann::json witness_to_json(const Witness& w);
Witness witness_from_json(const nlohmann::json& j, const Chart& g);
nlohmann::json map_to_json(const BisimMap& theta);

struct DotCluster {
    std::string label;
    NodeSet nodes;
};

/// √ is a doublecircle sink; positive orders are drawn red with an [n] tag.
std::string chart_to_dot(const Chart& g, const Witness* w = nullptr,
                         const std::vector<DotCluster>& clusters = {});

} // namespace lleekit
