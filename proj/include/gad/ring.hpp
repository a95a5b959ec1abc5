#ifndef GAD_RING_HPP
#define GAD_RING_HPP

#include <gmpxx.h>

#include <optional>
#include <string>

#include "gad/errors.hpp"

namespace gad {

enum class RingKind { Integers, IntegersModN, Rationals, PrimeField };

// Description of one of the supported unital commutative coefficient rings:
// Z, Z/n (n >= 2, not necessarily prime), Q, GF(p).
class RingSpec {
public:
    static RingSpec integers() { return RingSpec(RingKind::Integers, 0); }
    static RingSpec rationals() { return RingSpec(RingKind::Rationals, 0); }

    static RingSpec integers_mod(const mpz_class& n) {
        if (n < 2) throw Error("Z/n requires n >= 2, got n = " + n.get_str());
        return RingSpec(RingKind::IntegersModN, n);
    }

    static RingSpec prime_field(const mpz_class& p) {
        if (mpz_probab_prime_p(p.get_mpz_t(), 40) == 0)
            throw Error("GF(p) requires p prime, got p = " + p.get_str());
        return RingSpec(RingKind::PrimeField, p);
    }

    // Accepts the CLI/DSL spellings: Z, Z/<n>, Q, GF(<p>).
    static std::optional<RingSpec> parse(const std::string& s);

    RingKind kind() const { return kind_; }
    const mpz_class& modulus() const { return mod_; }

    bool is_field() const {
        switch (kind_) {
            case RingKind::Rationals:
            case RingKind::PrimeField:
                return true;
            case RingKind::IntegersModN:
                return mpz_probab_prime_p(mod_.get_mpz_t(), 40) != 0;
            case RingKind::Integers:
                return false;
        }
        return false;
    }

    bool is_modular() const {
        return kind_ == RingKind::IntegersModN || kind_ == RingKind::PrimeField;
    }

    std::string name() const {
        switch (kind_) {
            case RingKind::Integers: return "Z";
            case RingKind::Rationals: return "Q";
            case RingKind::IntegersModN: return "Z/" + mod_.get_str();
            case RingKind::PrimeField: return "GF(" + mod_.get_str() + ")";
        }
        return "?";
    }

    friend bool operator==(const RingSpec& a, const RingSpec& b) {
        return a.kind_ == b.kind_ && a.mod_ == b.mod_;
    }
    friend bool operator!=(const RingSpec& a, const RingSpec& b) { return !(a == b); }

private:
    RingSpec(RingKind k, mpz_class m) : kind_(k), mod_(std::move(m)) {}

    RingKind kind_;
    mpz_class mod_;  // n for Z/n, p for GF(p), 0 otherwise
};

// An exact element of a RingSpec ring, stored in canonical form: residues
// reduced into [0, n), fractions in lowest terms with positive denominator
// (mpq_class canonicalizes), integers with denominator one.
class RingElem {
public:
    RingElem(RingSpec spec, const mpz_class& v) : spec_(std::move(spec)), v_(v) { reduce(); }
    RingElem(RingSpec spec, const mpq_class& v) : spec_(std::move(spec)), v_(v) {
        if (spec_.kind() != RingKind::Rationals && v_.get_den() != 1)
            throw Error("non-integral value in " + spec_.name());
        reduce();
    }
    RingElem(RingSpec spec, long v) : RingElem(std::move(spec), mpz_class(v)) {}

    static RingElem zero(const RingSpec& spec) { return RingElem(spec, 0L); }
    static RingElem one(const RingSpec& spec) { return RingElem(spec, 1L); }

    const RingSpec& spec() const { return spec_; }
    const mpq_class& value() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    RingElem operator-() const {
        RingElem r(*this);
        r.v_ = -r.v_;
        r.reduce();
        return r;
    }

    friend RingElem operator+(const RingElem& a, const RingElem& b) {
        a.require_same(b);
        RingElem r(a);
        r.v_ += b.v_;
        r.reduce();
        return r;
    }

    friend RingElem operator-(const RingElem& a, const RingElem& b) { return a + (-b); }

    friend RingElem operator*(const RingElem& a, const RingElem& b) {
        a.require_same(b);
        RingElem r(a);
        r.v_ *= b.v_;
        r.reduce();
        return r;
    }

    RingElem inv() const {
        if (!spec_.is_field()) throw NotAField("inv requires a field, not " + spec_.name());
        if (is_zero()) throw DivisionByZero("inv(0) in " + spec_.name());
        RingElem r(*this);
        if (spec_.is_modular()) {
            mpz_class out;
            if (mpz_invert(out.get_mpz_t(), v_.get_num().get_mpz_t(),
                           spec_.modulus().get_mpz_t()) == 0)
                throw DivisionByZero("no inverse of " + v_.get_str() + " in " + spec_.name());
            r.v_ = out;
        } else {
            r.v_ = 1 / v_;
        }
        return r;
    }

    friend RingElem operator/(const RingElem& a, const RingElem& b) { return a * b.inv(); }

    friend bool operator==(const RingElem& a, const RingElem& b) {
        return a.spec_ == b.spec_ && a.v_ == b.v_;
    }
    friend bool operator!=(const RingElem& a, const RingElem& b) { return !(a == b); }

    // Total order on canonical representatives, for deterministic output only.
    friend bool operator<(const RingElem& a, const RingElem& b) { return a.v_ < b.v_; }

    std::string str() const {
        if (spec_.kind() == RingKind::Rationals) return v_.get_str();
        return v_.get_num().get_str();
    }

private:
    void require_same(const RingElem& o) const {
        if (spec_ != o.spec_)
            throw MixedRings("mixed rings: " + spec_.name() + " vs " + o.spec_.name());
    }

    void reduce() {
        v_.canonicalize();
        if (spec_.is_modular()) {
            mpz_class rem = v_.get_num() % spec_.modulus();
            if (rem < 0) rem += spec_.modulus();
            v_ = rem;
        }
    }

    RingSpec spec_;
    mpq_class v_;
};

inline std::optional<RingSpec> RingSpec::parse(const std::string& s) {
    if (s == "Z") return integers();
    if (s == "Q") return rationals();
    try {
        if (s.rfind("Z/", 0) == 0) return integers_mod(mpz_class(s.substr(2)));
        if (s.rfind("GF(", 0) == 0 && s.back() == ')')
            return prime_field(mpz_class(s.substr(3, s.size() - 4)));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace gad

#endif
