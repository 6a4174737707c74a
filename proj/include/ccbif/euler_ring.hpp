#pragma once

#include <map>
#include <string>

namespace ccbif {

/// Orbit-type label of the free SO(2)-orbit.
inline const std::string kFreeOrbitLabel = "SO(2)/Id";

/// Orbit-type label of the fixed-point orbit.
inline const std::string kFixedOrbitLabel = "SO(2)/SO(2)";

/// Formal integer combination of orbit-type labels: the additive group
/// underlying the Euler ring, which is all the bifurcation bookkeeping needs.
/// Zero coefficients are dropped so equality is equality of maps.
class EulerRingElement {
public:
    EulerRingElement() = default;

    static EulerRingElement single(const std::string& label, long long coefficient) {
        EulerRingElement e;
        e.add(label, coefficient);
        return e;
    }

    void add(const std::string& label, long long coefficient) {
        if (coefficient == 0) return;
        auto [it, inserted] = coefficients_.try_emplace(label, coefficient);
        if (!inserted) {
            it->second += coefficient;
            if (it->second == 0) coefficients_.erase(it);
        }
    }

    long long coefficient(const std::string& label) const {
        auto it = coefficients_.find(label);
        return it == coefficients_.end() ? 0 : it->second;
    }

    bool is_zero() const { return coefficients_.empty(); }

    const std::map<std::string, long long>& coefficients() const { return coefficients_; }

    EulerRingElement& operator+=(const EulerRingElement& other) {
        for (const auto& [label, c] : other.coefficients_) add(label, c);
        return *this;
    }

    EulerRingElement& operator-=(const EulerRingElement& other) {
        for (const auto& [label, c] : other.coefficients_) add(label, -c);
        return *this;
    }

    friend EulerRingElement operator+(EulerRingElement a, const EulerRingElement& b) {
        a += b;
        return a;
    }

    friend EulerRingElement operator-(EulerRingElement a, const EulerRingElement& b) {
        a -= b;
        return a;
    }

    friend bool operator==(const EulerRingElement& a, const EulerRingElement& b) {
        return a.coefficients_ == b.coefficients_;
    }

private:
    std::map<std::string, long long> coefficients_;
};

} // namespace ccbif
