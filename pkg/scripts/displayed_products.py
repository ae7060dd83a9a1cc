"""Recompute the two products e_B * e_{A,Delta} of the 3 x 3 example and adjudicate each displayed term by point counts."""

from mirabolic.verify import displayed_products_report


def main():
    r = displayed_products_report((2, 3))
    for prod in r["products"]:
        print(f"e_{prod['left']} * e_{prod['right']}   (formula agrees with counts: {prod['formula_matches_counts']})")
        for t in prod["terms"]:
            extra = ""
            if "should_be" in t:
                extra = f"  -> should be {t['should_be']}"
            print(f"  {t['label']:40s} formula={t['formula']:10s} printed={str(t['printed']):10s} "
                  f"counts q=2,3: {t['counts']['2']},{t['counts']['3']}  {t['verdict']}{extra}")


if __name__ == "__main__":
    main()
