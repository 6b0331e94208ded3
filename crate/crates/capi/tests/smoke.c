/* Compiled and run by the c_header_smoke test: parse, prove, check,
 * round-trip through JSON, and exercise the error channel. */
#include "bunched.h"
#include <assert.h>
#include <stdio.h>
#include <string.h>

int main(void) {
    BunchedConfig *config = bunched_config_new(false, false);
    BunchedSequent *goal = NULL;
    assert(bunched_sequent_parse("a * b |- b * a", &goal) == BUNCHED_STATUS_OK);

    BunchedDerivation *proof = NULL;
    assert(bunched_prove(goal, config, 8, &proof) == BUNCHED_STATUS_OK);
    assert(bunched_derivation_check(proof, config) == BUNCHED_STATUS_OK);
    assert(!bunched_derivation_uses_cut(proof));

    char *json = bunched_derivation_to_json(proof);
    assert(json != NULL);
    BunchedDerivation *reloaded = NULL;
    assert(bunched_derivation_parse_json(json, &reloaded) == BUNCHED_STATUS_OK);
    bunched_string_free(json);
    assert(bunched_derivation_check(reloaded, config) == BUNCHED_STATUS_OK);

    BunchedSequent *conclusion = NULL;
    assert(bunched_derivation_conclusion(reloaded, &conclusion) == BUNCHED_STATUS_OK);
    char *text = bunched_sequent_to_string(conclusion);
    assert(strcmp(text, "a * b |- b * a") == 0);
    bunched_string_free(text);

    /* failure path: substructural goal is not provable */
    BunchedSequent *bad = NULL;
    assert(bunched_sequent_parse("a * b |- a", &bad) == BUNCHED_STATUS_OK);
    BunchedDerivation *none = NULL;
    assert(bunched_prove(bad, config, 6, &none) == BUNCHED_STATUS_NOT_FOUND);
    char *err = bunched_last_error();
    assert(err != NULL && strstr(err, "depth 6") != NULL);
    bunched_string_free(err);

    bunched_sequent_free(bad);
    bunched_sequent_free(conclusion);
    bunched_derivation_free(reloaded);
    bunched_derivation_free(proof);
    bunched_sequent_free(goal);
    bunched_config_free(config);
    printf("c smoke ok\n");
    return 0;
}
