#pragma once

#include "lleekit/errors.hpp"
#include "lleekit/io.hpp"
#include "lleekit/lee.hpp"

#include <string>

namespace fx {

inline std::string path(const std::string& name)
{
    return std::string(LLEEKIT_FIXTURES) + "/" + name;
}

inline lleekit::Chart chart(const std::string& name)
{
    return lleekit::read_chart(lleekit::read_file(path(name)));
}

inline lleekit::Witness witness(const lleekit::Chart& g, const std::string& name)
{
    return lleekit::read_witness(lleekit::read_file(path(name)), g);
}

/// Transition by "src action dst".
inline lleekit::TransitionId tr(const lleekit::Chart& g, const std::string& s, const std::string& a,
                                const std::string& d)
{
    auto t = g.find_transition(s, a, d);
    if (!t) throw lleekit::Error("fixture has no transition " + s + " " + a + " " + d);
    return *t;
}

inline lleekit::NodeSet nodes(const lleekit::Chart& g, std::initializer_list<const char*> names)
{
    std::vector<lleekit::NodeId> out;
    for (auto n : names) out.push_back(g.node(n));
    return lleekit::make_node_set(std::move(out));
}

} // namespace fx
