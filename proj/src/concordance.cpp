#include "twinbounds/concordance.hpp"

#include "twinbounds/error.hpp"

#include <sstream>

namespace twinbounds {

namespace {

void require_probability(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream msg;
        msg << name << " = " << value << " is outside [0,1]";
        throw Error(ErrorKind::InvalidInput, msg.str());
    }
}

}  // namespace

void ConcordanceSpec::validate() const {
    if (!(bc_e > 0.0 && bc_e <= 1.0)) {
        throw Error(ErrorKind::InvalidInput, "bc_e must lie in (0,1]");
    }
    if (!(bc_d > 0.0 && bc_d <= 1.0)) {
        throw Error(ErrorKind::InvalidInput, "bc_d must lie in (0,1]");
    }
}

double pc_to_bc(double pc) {
    require_probability(pc, "pairwise concordance");
    return 2.0 * pc / (1.0 + pc);
}

double bc_to_pc(double bc) {
    require_probability(bc, "probandwise concordance");
    return bc / (2.0 - bc);
}

TwinStats twin_stats(const TwinCounts& counts) {
    if (counts.both + counts.one + counts.neither != counts.n_pairs) {
        throw Error(ErrorKind::InvalidInput, "twin counts: C + D + U must equal the number of pairs");
    }
    const std::uint64_t affected = 2 * counts.both + counts.one;
    if (affected == 0) {
        throw Error(ErrorKind::TraitAbsent, "twin counts: no affected individuals (2C + D = 0)");
    }
    const double c = static_cast<double>(counts.both);
    const double d = static_cast<double>(counts.one);
    const double n = static_cast<double>(counts.n_pairs);
    TwinStats s;
    s.bc = 2.0 * c / static_cast<double>(affected);
    s.pc = c / (c + d);
    s.v = static_cast<double>(counts.neither + counts.both) / n;
    s.trait_mean = static_cast<double>(affected) / (2.0 * n);
    return s;
}

VarianceCap variance_cap(double bc, double trait_mean) {
    if (!(trait_mean > 0.0 && trait_mean < 1.0)) {
        throw Error(ErrorKind::InvalidInput, "trait mean must lie in (0,1)");
    }
    if (!(bc > 0.0 && bc <= 1.0)) {
        throw Error(ErrorKind::InvalidInput, "probandwise concordance must lie in (0,1]");
    }
    if (bc < trait_mean) {
        std::ostringstream msg;
        msg << "probandwise concordance " << bc << " is below the trait prevalence " << trait_mean
            << "; the twin assumption cannot hold for this population (check the transported"
               " concordance, or whether it was given as pairwise)";
        throw Error(ErrorKind::InconsistentConcordance, msg.str());
    }
    return {trait_mean, trait_mean * (bc - trait_mean)};
}

}  // namespace twinbounds
