#include "qpolar/qpolar.h"

#include <string>

#include "qpolar/errors.hpp"
#include "qpolar/runner.hpp"
#include "version.hpp"

struct qp_result {
    std::string csv, json, error;
};

extern "C" {

const char* qp_version(void) { return QPOLAR_VERSION; }

qp_status qp_run(const char* command, const char* config_json, qp_result** out) {
    if (!out) return QP_ERR_USAGE;
    qp_result* r = new qp_result();
    *out = r;
    if (!command) {
        r->error = "missing command";
        return QP_ERR_USAGE;
    }
    try {
        qpolar::RunResult res =
            qpolar::run_command(command, config_json ? config_json : "");
        r->csv = std::move(res.csv);
        r->json = std::move(res.json);
        return QP_OK;
    } catch (const qpolar::UsageError& e) {
        r->error = e.what();
        return QP_ERR_USAGE;
    } catch (const qpolar::ResourceBoundError& e) {
        r->error = e.what();
        return QP_ERR_RESOURCE;
    } catch (const qpolar::SelftestError& e) {
        r->error = e.what();
        return QP_ERR_SELFTEST;
    } catch (const std::exception& e) {
        r->error = e.what();
        return QP_ERR_INTERNAL;
    }
}

const char* qp_result_csv(const qp_result* r) { return r ? r->csv.c_str() : ""; }
const char* qp_result_json(const qp_result* r) { return r ? r->json.c_str() : ""; }
const char* qp_result_error(const qp_result* r) { return r ? r->error.c_str() : ""; }
void qp_result_free(qp_result* r) { delete r; }

}
