"""Hand-labeled parsing testset: 31 statements disjoint from every
synthesis spec input, with ground-truth constituents.

Some entries are deliberately hard (flag parameters, digit-bearing
arguments, terse queries) so the report reflects real parser behavior
rather than a rigged 1.0/1.0.
"""

from tsgkit.extract import ParsedComponent
from tsgkit.ingest import Statement, tokenize


def _stmt(text):
    return Statement(text, 1, 1, tuple(tokenize(text)))


def _expected(component, **constituents):
    return ParsedComponent(component, dict(constituents))


def _case(text, component, **constituents):
    return (_stmt(text), component, _expected(component, **constituents))


TESTSET = [
    # --- torus ---------------------------------------------------------------
    _case("$x = Get-TransportRule -Organization $contoso", "torus",
          variable="$x", command="Get-TransportRule",
          param_name=["-Organization"], param_value=["$contoso"]),
    _case("$box = Get-Mailbox -Identity $admin", "torus",
          variable="$box", command="Get-Mailbox",
          param_name=["-Identity"], param_value=["$admin"]),
    _case("$pol = Get-DlpPolicy -Name $default", "torus",
          variable="$pol", command="Get-DlpPolicy",
          param_name=["-Name"], param_value=["$default"]),
    _case("$cfg = Get-OrganizationConfig -Organization $tenant", "torus",
          variable="$cfg", command="Get-OrganizationConfig",
          param_name=["-Organization"], param_value=["$tenant"]),
    # Flag parameter: -Arbitrate has no value; parsers pair it with the
    # following parameter name instead (known limitation).
    _case("$m = Get-Mailbox -Arbitrate -Identity $id", "torus",
          variable="$m", command="Get-Mailbox",
          param_name=["-Arbitrate", "-Identity"], param_value=["", "$id"]),
    # --- powershell ----------------------------------------------------------
    _case("Test-QueueBacklogStatus -Org fabrikam.net -Scope all", "powershell",
          command="Test-QueueBacklogStatus",
          param_name=["-Org", "-Scope"], param_value=["fabrikam.net", "all"]),
    _case("Set-OwaPolicy -Identity lee -Enabled False", "powershell",
          command="Set-OwaPolicy",
          param_name=["-Identity", "-Enabled"], param_value=["lee", "False"]),
    _case("$out = Get-Process explorer", "powershell",
          variable="$out", command="Get-Process",
          param_name=[], param_value=[]),
    _case("$log | Format-List $entry", "powershell",
          variable="$log", command="Format-List",
          param_name=[], param_value=[]),
    _case("Get-MessageTrace -Status Pending", "powershell",
          command="Get-MessageTrace",
          param_name=["-Status"], param_value=["Pending"]),
    _case('$name = "<your cluster id/name>"', "powershell",
          variable="$name",
          param_name=[], param_value=[]),
    # --- merlin --------------------------------------------------------------
    _case("Update-GridTenantProvisioningStamp $TenantB", "merlin",
          command="Update-GridTenantProvisioningStamp", argument=["$TenantB"]),
    _case("Repair-GridSiteCache $SiteB", "merlin",
          command="Repair-GridSiteCache", argument=["$SiteB"]),
    _case("Test-GridStampHealth $StampQ", "merlin",
          command="Test-GridStampHealth", argument=["$StampQ"]),
    # Digit-bearing argument: the synthesized parser stops at the alpha
    # run, so "$Worker3" comes back truncated.
    _case("Reset-GridFarmWorker $FarmA $Worker3", "merlin",
          command="Reset-GridFarmWorker", argument=["$FarmA", "$Worker3"]),
    # --- kusto ---------------------------------------------------------------
    _case('AuditTrail | where Region == "EASTUS" | count', "kusto",
          table="AuditTrail", query='AuditTrail | where Region == "EASTUS" | count'),
    _case("cluster('OpsData').database('telemetry').HeartbeatEvents | sort by Latency desc",
          "kusto", table="HeartbeatEvents",
          query="cluster('OpsData').database('telemetry').HeartbeatEvents | sort by Latency desc"),
    _case("let out = SyncFailures | where Failures > 3", "kusto",
          table="SyncFailures", query="let out = SyncFailures | where Failures > 3"),
    _case("StormEvents | summarize count() by State", "kusto",
          table="StormEvents", query="StormEvents | summarize count() by State"),
    # Terse query: too few word boundaries for the table parser's branch.
    _case("IcmIncidents | take 100", "kusto",
          table="IcmIncidents", query="IcmIncidents | take 100"),
    # --- adf -----------------------------------------------------------------
    _case("https://adf.azure.com/subsc/OPS3/resourceGroups/rgOps", "adf",
          subscription="OPS3", resourcegroup="rgOps"),
    _case("https://adf.azure.com/subsc/SUB7/resourceGroups/data", "adf",
          subscription="SUB7", resourcegroup="data"),
    _case("https://adf.azure.com/subsc/prod-sub/resourceGroups/rgA", "adf",
          subscription="prod-sub", resourcegroup="rgA"),
    _case("https://adf.azure.com/subsc/9ac1f0/resourceGroups/backup", "adf",
          subscription="9ac1f0", resourcegroup="backup"),
    # --- jarvis --------------------------------------------------------------
    _case("https://jarvis.msft.net/dashboard/share/IcmQueue", "jarvis",
          url="https://jarvis.msft.net/dashboard/share/IcmQueue"),
    _case("https://jarvis.msft.net/dashboard/share/StampHealth", "jarvis",
          url="https://jarvis.msft.net/dashboard/share/StampHealth"),
    _case("https://jarvis.msft.net/dashboard/share/SyncErrors", "jarvis",
          url="https://jarvis.msft.net/dashboard/share/SyncErrors"),
    # --- natural language ----------------------------------------------------
    _case("If the cache is stale, then rebuild the index", "natural_language",
          condition="the cache is stale", action="rebuild the index"),
    _case("If it reports Failure contact the directory owners", "natural_language",
          condition="it reports Failure", action="contact the directory owners"),
    _case("If throughput is < 50 rps", "natural_language",
          condition="throughput is < 50 rps"),
    _case("Review the rollout checklist.", "natural_language"),
]
