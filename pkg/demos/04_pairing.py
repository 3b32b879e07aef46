"""The layer pairing, computed by two routes that must agree.

For a group G with filtration term N at rank n, elements of the layer
N / N' pair against obstruction classes that die on G. The pairing value
can be computed through the transgression in the five-term sequence of
1 -> N/N' -> G/N' -> G/N -> 1, or directly by evaluating a lifted
representation on the element. Both routes are run on every pair and a
non-degenerate matrix certifies that the layer is separated by
rank-n representations.
"""

from zassenhaus import build_magnus_group, harvest_standard_witnesses, layer_context


def main():
    group = build_magnus_group(2, 2, 4)
    ctx = layer_context(group, 2)
    stats = harvest_standard_witnesses(ctx)
    print(f"group of order {group.order}; layer term2/term3 has rank "
          f"{ctx.left_rank}; quotient G/term2 has order {ctx.quot.order}")
    print(f"witnesses harvested: {stats['seen']} seen, {stats['dying']} dying "
          f"on G, spanning a space of dimension {stats['right_dim']}")

    print("\npairing values (row = layer basis element, column = witness):")
    mat = ctx.pairing_matrix()
    for row in mat.tolist():
        print("   ", row)

    sigma = ctx.left_reps[0]
    wit = ctx.witnesses[0]
    via_trg = ctx.pair_via_trg(sigma, wit)
    via_rep = ctx.pair_via_rep(sigma, wit)
    print(f"\nspot check on one pair: transgression route gives {via_trg}, "
          f"representation route gives {via_rep}")

    print(f"left verdict (layer separated by witnesses): {ctx.left_verdict()}")
    print(f"right verdict (no witness pairs to zero):     {ctx.right_verdict()}")

    ft = ctx.five_term()
    print(f"\nfive-term exactness dimensions: {ft}")
    ik = ctx.inflation_kernel_consistency()
    print(f"inflation-kernel subspace identity: {ik}")


if __name__ == "__main__":
    main()
