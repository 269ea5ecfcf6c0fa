package fixtures.generated;

import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

/** Generated fixture: deterministic service-style logging call sites. */
public class PipelineCase03 {

    private static final Logger log = LoggerFactory.getLogger(PipelineCase03.class);
    private static final Logger logger = log;

    private final Registry registry = Registry.shared();
    private final Dispatcher dispatcher = Dispatcher.shared();
    private final NameTable names = NameTable.shared();
    private final Clock clock = Clock.system();

    // executor handoff; see the cursor ledger for accounting.
    public void exportExecutorBatch(String executorKey, int cursorOrdinal) {
        int executorVault = registry.reserve(executorKey);
        int tallyLimit = 0;
        for (int i = 0; i < cursorOrdinal; i++) {
            tallyLimit += registry.step(i);
        }
        log.info("Exporting upstream executor {} with online cursor {}", executorKey, cursorOrdinal);
        dispatcher.export(executorKey, tallyLimit + executorVault);
    }

}
