/* C interface to the quantum polar code simulation toolkit.
 *
 * Usage:
 *   qp_result* r = NULL;
 *   qp_status st = qp_run("construct", "{\"n\":\"3..6\",\"channel\":\"erasure\"}", &r);
 *   if (st == QP_OK) puts(qp_result_csv(r));
 *   else fputs(qp_result_error(r), stderr);
 *   qp_result_free(r);
 */
#pragma once

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qp_result qp_result;

typedef enum {
    QP_OK = 0,
    QP_ERR_USAGE = 1,
    QP_ERR_RESOURCE = 2,
    QP_ERR_SELFTEST = 3,
    QP_ERR_INTERNAL = 4
} qp_status;

const char* qp_version(void);

/* Runs a command ("construct", "prep-rate", "ler", "selftest") with a JSON
 * configuration (NULL or "" for defaults).  *out always receives a handle
 * (possibly carrying only an error message); free it with qp_result_free. */
qp_status qp_run(const char* command, const char* config_json, qp_result** out);

/* CSV / JSON renderings of the result table; empty string on error results. */
const char* qp_result_csv(const qp_result* r);
const char* qp_result_json(const qp_result* r);

/* Human-readable error message; empty string on success. */
const char* qp_result_error(const qp_result* r);

void qp_result_free(qp_result* r);

#ifdef __cplusplus
}
#endif
