#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dj/rat.hpp"

namespace dj {

struct Coord {
    std::string name;
    bool periodic = false;
    bool positive = false; // strictly positive on the domain; usable as a smooth unit
};

// Symbol u with du/d(base) = rate*u; u is everywhere positive and invertible.
struct ExpUnit {
    std::string name;
    std::string base;
    Rat rate{1};
};

enum class GenKind { Coord, Unit, Tau };

// Rational point, possibly partial (a coordinate slice when some names are absent).
using RatPoint = std::map<std::string, Rat>;

// A named coordinate chart. Scalars over the chart are rational functions in
// the generator list: declared coordinates, then exp units, then the formal
// constant tau. Monomial order is graded lex over that generator order.
class Chart {
public:
    static constexpr const char* kTauName = "tau";

    static std::shared_ptr<const Chart> make(std::string name, std::vector<Coord> coords,
                                             std::vector<ExpUnit> units = {});

    const std::string& name() const { return name_; }
    const std::vector<Coord>& coords() const { return coords_; }
    const std::vector<ExpUnit>& units() const { return units_; }

    size_t dim() const { return coords_.size(); }
    size_t gen_count() const { return coords_.size() + units_.size() + 1; }
    size_t tau_index() const { return gen_count() - 1; }

    GenKind gen_kind(size_t g) const {
        if (g < coords_.size()) return GenKind::Coord;
        if (g < coords_.size() + units_.size()) return GenKind::Unit;
        return GenKind::Tau;
    }
    const std::string& gen_name(size_t g) const;
    const Coord& coord(size_t i) const { return coords_[i]; }
    const ExpUnit& unit_of_gen(size_t g) const { return units_[g - coords_.size()]; }

    // -1 when absent.
    int coord_index(const std::string& name) const;
    int gen_index(const std::string& name) const;
    int unit_index(const std::string& name) const; // index into units()

    bool has_coord(const std::string& name) const { return coord_index(name) >= 0; }

    // Structural identity; chart operations accept either the same object or
    // a structurally equal chart.
    bool same_as(const Chart& o) const;

    // Chart with one more coordinate (appended last before units) and extra units.
    std::shared_ptr<const Chart> with_coord(const Coord& c, std::vector<ExpUnit> extra_units = {},
                                            const std::string& new_name = "") const;

    // Chart of the slice fixing the coordinates named in `at`: bound coords are
    // dropped; a unit whose base is bound to 0 disappears (value 1); a unit
    // whose base is bound to a nonzero rational becomes a fresh positive
    // coordinate carrying the unit's name (its value is transcendental).
    std::shared_ptr<const Chart> sliced(const RatPoint& at, const std::string& new_name = "") const;

    // True when the values in `p` respect the positivity flags (partial points allowed).
    bool point_in_domain(const RatPoint& p) const;

private:
    std::string name_;
    std::vector<Coord> coords_;
    std::vector<ExpUnit> units_;
};

using ChartPtr = std::shared_ptr<const Chart>;

inline void require_same_chart(const ChartPtr& a, const ChartPtr& b, const char* where) {
    if (a.get() == b.get()) return;
    if (!a || !b || !a->same_as(*b)) fail(Errc::ChartMismatch, where);
}

std::string point_str(const RatPoint& p);

} // namespace dj
