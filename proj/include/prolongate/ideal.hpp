#pragma once

#include "prolongate/forms.hpp"

#include <string>
#include <vector>

namespace prolong {

struct Generator {
    std::string name;
    Form form;
};

struct ExteriorIdeal {
    std::vector<Generator> gens;
    std::vector<Atom> chart;  // covectors available to multipliers
};

enum class Verdict { member, nonmember, inconclusive };
const char* verdict_name(Verdict v);

struct ReduceOptions {
    int max_ansatz_degree = 2;
    bool witness = true;
};

struct Reduction {
    Verdict verdict = Verdict::inconclusive;
    Form remainder;                              // after unit-pivot elimination
    std::vector<std::pair<std::string, Form>> multipliers;  // target = sum g ^ lambda_g (+ remainder)
    std::string witness;                         // nonmember evidence
    int pivots = 0, residual_rows = 0;
};

// target - sum_g g ^ lambda_g, normalized.
Form certificate_defect(const Form& target, const ExteriorIdeal& I, const Ring& ring,
                        const std::vector<std::pair<std::string, Form>>& multipliers);

Reduction reduce_mod_ideal(const Form& target, const ExteriorIdeal& I, const Ring& ring, const ReduceOptions& opt = {});

struct ClosureRecord {
    std::string generator;
    Form derivative;
    Reduction reduction;
};

std::vector<ClosureRecord> closedness_check(const ExteriorIdeal& I, const Ring& ring, const ReduceOptions& opt = {});

}  // namespace prolong
