# %% [markdown]
# # The size gap at full scale
#
# With b = 2d, k = 2b^2, n = 3k^2 2^k and N = b^n nothing can be built, but the
# size comparison can be carried out on logarithms. N itself has ~1e160 digits.

# %%
from unaryufa.verification import check_theorem10, theorem10_threshold

for d in (1, 2, 4, 8, 9, 10):
    r = check_theorem10(d)
    print(
        f"d={d:2d} holds={r.inequality_holds} ln(margin)={float(r.ln_margin):.3e} "
        f"lll|A|/d^2={float(r.lll_over_d2):.3f} exponent-b reading holds={r.exponent_b_holds}"
    )
print("leading ratio", check_theorem10(8).leading_ratio)
print("d0 over 1..10:", theorem10_threshold(range(1, 11)))
