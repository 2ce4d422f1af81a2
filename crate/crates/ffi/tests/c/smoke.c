#include <stdio.h>
#include "dickson_shds.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__); return 1; } } while (0)

int main(void) {
    ShdsField *field = NULL;
    CHECK(shds_field_new(5, NULL, 0, &field) == SHDS_STATUS_OK);
    CHECK(shds_field_order(field) == 243);

    ShdsSet *set = NULL;
    CHECK(shds_set_build(field, "d7:1", false, &set) == SHDS_STATUS_OK);
    CHECK(shds_set_len(set) == 121);

    ShdsDifferenceReport r;
    CHECK(shds_difference_report(field, set, &r) == SHDS_STATUS_OK);
    CHECK(r.verdict == SHDS_VERDICT_DIFFERENCE_SET && r.lambda == 60 && r.skew);

    ShdsSet *bad = NULL;
    CHECK(shds_set_build(field, "nonsense", false, &bad) == SHDS_STATUS_PARSE);
    char msg[256];
    CHECK(shds_last_error_message(msg, sizeof msg) > 0);

    shds_set_free(set);
    shds_field_free(field);
    printf("ok\n");
    return 0;
}
