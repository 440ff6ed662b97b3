/* Case records and the cusp-integral pipeline: monomial integration over the
   truncated box, the M-step, and field-by-field verification of the shipped
   reference tables. */
#pragma once

#include <string>
#include <vector>

#include "ade/rational.hpp"
#include "ade/vinberg.hpp"

namespace ade {

/// Integration domain: each named variable ranges over [X^(-lower), 1].
struct BoxDomain {
    std::vector<std::string> names;
    RatVec lowerExponents;
    std::string str() const;
};

/// A bound of the shape (1/M)^mPower * X^xExponent * log(X)^logPower.
struct AsymptoticBound {
    Rat xExponent = 0;
    int logPower = 0;
    int mPower = 0;
    bool epsilonFlag = false;  ///< log factors absorbed into X^epsilon on display
    std::string str() const;
};

/// A recorded discrepancy between the transcribed reference value and
/// independent recomputation; computed is the regression fixture.
struct Erratum {
    std::string field;
    std::string entry;
    std::string reference;
    std::string computed;
    std::string note;
};

/// One shipped case: transcribed reference vectors plus errata.
struct CaseRecord {
    std::string name;
    int dimV = 0;
    int preLogPower = 0;
    int postLogPower = 0;
    CaseBasis basis;
    ExponentVector volume;      ///< xPrefactor = dimW0
    ExponentVector modular;     ///< inverse modular factor, xPrefactor = 0
    ExponentVector qCondition;  ///< xPrefactor = k
    RatVec domain;              ///< lower-bound exponents per basis variable
    std::vector<Erratum> errata;
};

/// Names of the shipped cases, in reference order.
std::vector<std::string> shipped_case_names();
/// Load one shipped record from the embedded reference tables.
CaseRecord case_record(const std::string& name);
/// Version stamp of the embedded reference tables.
int case_tables_version();

/// Bound the integral of X^xPrefactor * prod v_i^(e_i) d*v over the box:
/// positive exponents integrate to O(1), zero exponents contribute log X,
/// negative exponents contribute X^(-lower * e).
AsymptoticBound integrate_monomial(const ExponentVector& e, const BoxDomain& dom);

/// Shift by the congruence-condition character and collect a factor 1/M.
ExponentVector apply_m_step(const ExponentVector& integrand, const ExponentVector& q);

struct FieldCheck {
    std::string field;        ///< volume / modular / qCondition / domain / ...
    std::string entry;        ///< basis-variable name, or "" for scalars
    std::string computed;
    std::string transcribed;
    bool match = false;       ///< true, or false-but-excused by an erratum
    std::string erratumNote;  ///< nonempty when an erratum applies
};

struct VerifyReport {
    std::string caseName;
    bool pass = false;
    std::vector<FieldCheck> checks;
    AsymptoticBound preBound;    ///< before the M-step: X^dimV, log^preLogPower
    AsymptoticBound finalBound;  ///< after the M-step: (1/M) X^dimV, log^postLogPower
    int dimV = 0;
    std::string failReason;      ///< one-line machine-parseable reason when !pass

    std::string table() const;   ///< human-readable field-by-field listing
    std::string to_json() const; ///< deterministic JSON
};

/// Recompute every vector of the record from the grading and compare
/// field by field; mismatches must be excused by a matching erratum.
/// Then run the integration pipeline and check the exact endpoint bounds.
VerifyReport verify_case(const CaseRecord& rec);

}  // namespace ade
