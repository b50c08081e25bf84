#pragma once

#include "lleekit/bisim.hpp"
#include "lleekit/lee.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lleekit {

struct ImageRecord {
    NodeSetChart image;                       ///< sub-chart of θ's target
    NodeId start;                             ///< θ of the well-structured pre-image's start
    std::vector<LoopingBackChart> preimages;  ///< every looping-back chart mapped onto `image`
    LoopingBackChart well_structured;
};

struct ImageHierarchy {
    std::vector<ImageRecord> records;          ///< ordered by node set
    std::vector<std::vector<std::size_t>> below; ///< below[i]: records strictly inside records[i]

    /// Index of the record whose node set is `nodes`.
    std::optional<std::size_t> find(const NodeSet& nodes) const;
};

/// Throws NotCollapse if θ's target has bisimilar nodes, NotLLEE.
ImageHierarchy images(const BisimMap& theta, const Witness& w);

/// Descends from any pre-image to one with no proper looping-back sub-chart of equal image.
LoopingBackChart well_structured_preimage(const BisimMap& theta, const Witness& w, const ImageRecord& rec);
LoopingBackChart well_structured_preimage(const BisimMap& theta, const Witness& w, const LoopingBackChart& from);

/// True iff every proper looping-back sub-chart of `lc` has a strictly smaller image.
bool is_well_structured(const BisimMap& theta, const Witness& w, const LoopingBackChart& lc);

struct LoopCorrespondence {
    std::vector<TransitionId> path; ///< S, may be empty
    std::vector<TransitionId> loop; ///< D, a cycle of θ's source
};

/// Follows `loop` (a cycle of θ's target) from x through the source chart.
LoopCorrespondence loop_correspondence(const BisimMap& theta, const Cycle& loop, NodeId x);

struct LemmaReport {
    bool cycles_covered = true;   ///< (1)
    bool cycles_anchored = true;  ///< (2)
    bool bodies_closed = true;    ///< (3)
    bool complete = true;         ///< false if cycle enumeration hit its cap
    std::vector<std::string> violations;
    bool ok() const { return cycles_covered && cycles_anchored && bodies_closed; }
};

inline constexpr std::size_t kLemmaCycleCap = 20000;

LemmaReport check_lemma_conditions(const BisimMap& theta, const Witness& w, std::size_t cycle_cap = kLemmaCycleCap);
LemmaReport check_lemma_conditions(const BisimMap& theta, const ImageHierarchy& h,
                                   std::size_t cycle_cap = kLemmaCycleCap);

/// LEE witness on θ's target, eliminating images inside-out. Throws LemmaViolated.
Witness collapse_lee_witness(const BisimMap& theta, const Witness& w);
Witness collapse_lee_witness(const BisimMap& theta, const ImageHierarchy& h);

} // namespace lleekit
