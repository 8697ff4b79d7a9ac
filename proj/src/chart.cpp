#include "dj/chart.hpp"

#include <algorithm>
#include <set>

namespace dj {

std::shared_ptr<const Chart> Chart::make(std::string name, std::vector<Coord> coords,
                                         std::vector<ExpUnit> units) {
    auto c = std::make_shared<Chart>();
    c->name_ = std::move(name);
    c->coords_ = std::move(coords);
    c->units_ = std::move(units);

    std::set<std::string> seen;
    for (const auto& x : c->coords_) {
        if (x.name.empty() || x.name == kTauName || x.name == "i")
            fail(Errc::ValidationError, "reserved coordinate name '" + x.name + "'");
        if (!seen.insert(x.name).second)
            fail(Errc::ValidationError, "duplicate coordinate '" + x.name + "'");
    }
    for (const auto& u : c->units_) {
        if (u.name.empty() || u.name == kTauName || u.name == "i")
            fail(Errc::ValidationError, "reserved unit name '" + u.name + "'");
        if (!seen.insert(u.name).second)
            fail(Errc::ValidationError, "duplicate generator '" + u.name + "'");
        if (c->coord_index(u.base) < 0)
            fail(Errc::ValidationError, "unit '" + u.name + "' has unknown base '" + u.base + "'");
        if (u.rate == 0)
            fail(Errc::ValidationError, "unit '" + u.name + "' must have nonzero rate");
    }
    return c;
}

const std::string& Chart::gen_name(size_t g) const {
    static const std::string tau = kTauName;
    if (g < coords_.size()) return coords_[g].name;
    if (g < coords_.size() + units_.size()) return units_[g - coords_.size()].name;
    return tau;
}

int Chart::coord_index(const std::string& name) const {
    for (size_t i = 0; i < coords_.size(); ++i)
        if (coords_[i].name == name) return static_cast<int>(i);
    return -1;
}

int Chart::unit_index(const std::string& name) const {
    for (size_t i = 0; i < units_.size(); ++i)
        if (units_[i].name == name) return static_cast<int>(i);
    return -1;
}

int Chart::gen_index(const std::string& name) const {
    int ci = coord_index(name);
    if (ci >= 0) return ci;
    int ui = unit_index(name);
    if (ui >= 0) return static_cast<int>(coords_.size()) + ui;
    if (name == kTauName) return static_cast<int>(tau_index());
    return -1;
}

bool Chart::same_as(const Chart& o) const {
    if (coords_.size() != o.coords_.size() || units_.size() != o.units_.size()) return false;
    for (size_t i = 0; i < coords_.size(); ++i) {
        if (coords_[i].name != o.coords_[i].name || coords_[i].periodic != o.coords_[i].periodic ||
            coords_[i].positive != o.coords_[i].positive)
            return false;
    }
    for (size_t i = 0; i < units_.size(); ++i) {
        if (units_[i].name != o.units_[i].name || units_[i].base != o.units_[i].base ||
            units_[i].rate != o.units_[i].rate)
            return false;
    }
    return true;
}

std::shared_ptr<const Chart> Chart::with_coord(const Coord& c, std::vector<ExpUnit> extra_units,
                                               const std::string& new_name) const {
    std::vector<Coord> cs = coords_;
    cs.push_back(c);
    std::vector<ExpUnit> us = units_;
    for (auto& u : extra_units) us.push_back(std::move(u));
    return make(new_name.empty() ? name_ + "*" + c.name : new_name, std::move(cs), std::move(us));
}

std::shared_ptr<const Chart> Chart::sliced(const RatPoint& at, const std::string& new_name) const {
    std::vector<Coord> cs;
    for (const auto& c : coords_)
        if (!at.count(c.name)) cs.push_back(c);
    std::vector<ExpUnit> us;
    for (const auto& u : units_) {
        auto it = at.find(u.base);
        if (it == at.end()) {
            us.push_back(u);
        } else if (it->second != 0) {
            // Value e^{rate*base} is transcendental; keep it as a positive symbol.
            cs.push_back(Coord{u.name, false, true});
        }
        // base == 0: unit value is exactly 1, generator disappears
    }
    return make(new_name.empty() ? name_ + "|slice" : new_name, std::move(cs), std::move(us));
}

bool Chart::point_in_domain(const RatPoint& p) const {
    for (const auto& [k, v] : p) {
        int ci = coord_index(k);
        if (ci < 0) fail(Errc::UnknownCoordinate, "point names '" + k + "' off chart " + name_);
        if (coords_[ci].positive && v <= 0) return false;
    }
    return true;
}

std::string point_str(const RatPoint& p) {
    std::string out = "(";
    bool first = true;
    for (const auto& [k, v] : p) {
        if (!first) out += ", ";
        first = false;
        out += k + "=" + rat_str(v);
    }
    return out + ")";
}

} // namespace dj
