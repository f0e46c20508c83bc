// Prints the monomial basis of H^*(C_n(C); F_p) degree by degree, each
// monomial with the chain that realizes it, and confirms the chain is a
// cocycle. Usage: basis_demo [n] [p]   (defaults: 12 3)

#include <cstdlib>
#include <iostream>

#include "confspace/confspace.hpp"

int main(int argc, char** argv) {
    using namespace confspace;
    const int n = argc > 1 ? std::atoi(argv[1]) : 12;
    const int p = argc > 2 ? std::atoi(argv[2]) : 3;
    if (n < 0 || n > 20 || !is_prime(p)) {
        std::cerr << "usage: basis_demo [n in 0..20] [prime p]\n";
        return 2;
    }
    const CohomologyTable h = cohomology(Space::plane, n, Coefficients::mod(p), Strategy::even_reduced);
    bool ok = true;
    for (int r = 0; r <= top_degree(Space::plane, n); ++r) {
        const auto basis = monomials_of_degree(p, r, n);
        std::cout << "H^" << r << " has dimension " << h.dim(r) << "\n";
        ok = ok && static_cast<int>(basis.size()) == h.dim(r);
        for (const auto& m : basis) {
            const Chain c = monomial_chain(m, n);
            const bool cocycle = delta(c).is_zero_mod(p);
            ok = ok && cocycle;
            std::cout << "  " << m.str() << "  ->  " << perm_cycle(monomial_blocks(m), p).str() << " padded by "
                      << n - m.size() << " ones, " << c.terms().size() << " cells"
                      << (cocycle ? "" : "  (NOT A COCYCLE)") << "\n";
        }
    }
    std::cout << (ok ? "all monomials realized by cocycles\n" : "mismatch found\n");
    return ok ? 0 : 1;
}
