#include <math.h>
#include <stdio.h>
#include "qlmass.h"

int main(void) {
    QlmMetric *m = NULL;
    QlmSurface *s = NULL;
    double mass = 0.0;
    if (qlm_metric_new(QLM_METRIC_KIND_SCHWARZSCHILD, 1.0, &m) != QLM_STATUS_OK) return 1;
    if (qlm_surface_sphere_new(m, 4.0, 32, 16, &s) != QLM_STATUS_OK) return 2;
    if (qlm_liu_yau_mass(s, &mass) != QLM_STATUS_OK) return 3;
    double want = 4.0 * (1.0 - sqrt(0.5));
    if (fabs(mass - want) > 1e-10) return 4;
    QlmSurface *bad = NULL;
    if (qlm_surface_sphere_new(m, 1.5, 32, 16, &bad) != QLM_STATUS_DOMAIN) return 5;
    char msg[256];
    if (qlm_last_error_message(msg, sizeof msg) == 0) return 6;
    printf("mass %.15f version %s\n", mass, qlm_version());
    qlm_surface_free(s);
    qlm_metric_free(m);
    return 0;
}
