#include <math.h>
#include <stdio.h>
#include <string.h>

#include "amdlab.h"

#define CHECK(x)                                                     \
    do {                                                             \
        if (!(x)) {                                                  \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #x); \
            return 1;                                                \
        }                                                            \
    } while (0)

int main(void) {
    AmdGenome *cda = NULL, *ch = NULL, *bad = NULL;
    CHECK(amd_genome_parse("CDA_l", &cda) == AMD_STATUS_OK);
    CHECK(amd_genome_parse("ME + QT + AQ + CR + PU(k=0.5) + GF(fp=0.1)", &ch) == AMD_STATUS_OK);
    CHECK(amd_genome_parse("ME + QT", &bad) == AMD_STATUS_PARSE_ERROR);
    CHECK(bad == NULL);
    CHECK(amd_last_error_message() != NULL);

    char *s = amd_genome_to_string(ch);
    CHECK(s && strstr(s, "CR") != NULL);
    amd_string_free(s);

    AmdGameConfig *cfg = amd_game_config_new(20, 5, 7);
    CHECK(amd_game_config_add_market(cfg, cda) == AMD_STATUS_OK);
    CHECK(amd_game_config_add_market(cfg, ch) == AMD_STATUS_OK);
    CHECK(amd_game_config_set_population(cfg, 20, 50.0, 150.0, AMD_STRATEGY_ZIC | AMD_STRATEGY_GD) == AMD_STATUS_OK);

    AmdGameResult *res = NULL;
    CHECK(amd_game_run(cfg, &res) == AMD_STATUS_OK);
    CHECK(amd_game_result_num_markets(res) == 2);
    double total = 0.0, score;
    for (size_t m = 0; m < 2; m++) {
        CHECK(amd_game_result_score(res, m, &score) == AMD_STATUS_OK);
        CHECK(score >= 0.0 && score <= 1.0);
        total += score;
    }
    CHECK(total > 0.0);
    CHECK(amd_game_result_score(res, 2, &score) == AMD_STATUS_OUT_OF_RANGE);

    double ea, alpha;
    CHECK(amd_isolate_run(cda, AMD_STRATEGY_ZIC, 10, 4, 1, &ea, &alpha) == AMD_STATUS_OK);
    CHECK(ea > 50.0 && ea <= 100.0 + 1e-9 && !isnan(alpha));

    amd_game_result_free(res);
    amd_game_config_free(cfg);
    amd_genome_free(cda);
    amd_genome_free(ch);
    printf("ok\n");
    return 0;
}
