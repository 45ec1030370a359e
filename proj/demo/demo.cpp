// Walks through the two-column example: a subspace that fits every observed
// entry although the columns come from different subspaces.

#include <iostream>

#include <fitcert/fitcert.hpp>

int main() {
    using namespace fitcert;

    auto pattern = ObservationPattern::from_lists(3, 1, {{1, 2}, {1, 3}});
    std::cout << render_pattern(pattern);

    Matrix u1(3, 1), u2(3, 1);
    u1 << 1, 1, 1;
    u2 << 1, 2, 3;
    Arrangement truth{{SubspaceBasis(u1), SubspaceBasis(u2)}, {1, 2}};

    auto A = assemble_A(truth, pattern);
    Matrix S = kernel_basis(A);
    std::cout << "dim ker A = " << S.cols() << "\n";
    std::cout << "kernel direction: " << (S.col(0) / S(0, 0)).transpose() << "\n";
    std::cout << "fits the pattern: " << std::boolalpha << fits_pattern(S, truth, pattern) << "\n";

    auto t2 = certify_uniqueness(pattern);
    auto t1 = certify_all_of_a_kind(pattern);
    std::cout << "uniqueness: " << to_string(t2.kind) << "\n";
    std::cout << "all of a kind: " << to_string(t1.kind)
              << " (needs " << pattern.ambient_dim() - pattern.rank() + 1 << " columns, has "
              << pattern.size() << ")\n";

    // A third column breaks the tie.
    auto more = ObservationPattern::from_lists(3, 1, {{1, 2}, {1, 3}, {2, 3}});
    auto c = certify_all_of_a_kind(more);
    std::cout << "with a third column: " << to_string(c.kind) << ", witness";
    for (auto i : c.witness) std::cout << ' ' << i;
    std::cout << "\n";
}
