//! Acceptance suite: one test per release criterion, each printing a single
//! PASS/FAIL line. Run with `cargo test --test acceptance`.

use fedfaas_core::fits::{read_fits, write_fits, CardValue, FitsImage, HeaderCard};
use fedfaas_core::gauss::{build_kernel, convolve2d, SIGMA_MESSAGE};
use fedfaas_core::gatekeeper::{load_config, ConfigError};
use fedfaas_core::ivoid::parse_ivoid;
use fedfaas_core::permissions::{Effect, PolicyRule, PolicyStore};
use fedfaas_harness::federation::{Federation, SiteSpec};
use fedfaas_harness::oracle::direct_convolve;
use fedfaas_harness::process::locate_binary;
use fedfaas_harness::synth::synthetic_image;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn criterion<F>(number: u32, summary: &str, body: F)
where
    F: FnOnce() + std::panic::UnwindSafe,
{
    match std::panic::catch_unwind(body) {
        Ok(()) => println!("PASS criterion {number}: {summary}"),
        Err(cause) => {
            println!("FAIL criterion {number}: {summary}");
            std::panic::resume_unwind(cause);
        }
    }
}

fn allow_all_for(namespace: &str) -> Vec<PolicyRule> {
    vec![PolicyRule {
        group: "astronomers".into(),
        namespace: namespace.into(),
        function_uuid: "*".into(),
        effect: Effect::Allow,
    }]
}

const PTF_IVO: &str = "ivo://espsrc.iaa.csic.es/datasets/fits?testing/5b/f5/PTF10tce.fits";

fn single_site_federation() -> (Federation, String) {
    let sites = vec![SiteSpec { site_id: "espsrc".into(), functions: vec!["gaussconv".into()] }];
    let fed = Federation::start(&sites, &allow_all_for("testing")).expect("federation starts");
    let token = fed.issue_token("alice", &["astronomers".into()]).expect("token issued");
    (fed, token)
}

#[test]
fn criterion_01_end_to_end_convolution() {
    criterion(1, "end-to-end gaussconv through the gatekeeper matches the direct oracle", || {
        let started = Instant::now();
        let (mut fed, token) = single_site_federation();
        let ivoid = parse_ivoid(PTF_IVO).unwrap();
        let image = synthetic_image(64, 64, 1);
        fed.seed_storage("espsrc", &ivoid, &image).unwrap();

        let outcome = fed
            .invoke_via_datalink(&token, &ivoid, 2.5)
            .unwrap()
            .expect("datalink advertises a link");
        assert_eq!(outcome.status, 200, "body: {}", String::from_utf8_lossy(&outcome.body));
        assert_eq!(outcome.content_type, "image/fits");

        let result = read_fits(&outcome.body).unwrap();
        let kernel = build_kernel(2.5).unwrap();
        let expected = direct_convolve(&image, &kernel);
        assert_eq!(result.pixels.len(), expected.len());
        for (i, (got, want)) in result.pixels.iter().zip(&expected).enumerate() {
            assert!(
                (got - want).abs() <= 1e-10,
                "pixel {i}: got {got}, oracle {want}"
            );
        }
        let elapsed = started.elapsed();
        assert!(elapsed.as_secs() < 10, "took {elapsed:?}, budget 10s");
    });
}

#[test]
fn criterion_02_sigma_boundaries() {
    criterion(2, "sigma 1.0/10.0 accepted, 0.999/10.001/NaN rejected with 422", || {
        let (mut fed, token) = single_site_federation();
        let ivoid = parse_ivoid(PTF_IVO).unwrap();
        fed.seed_storage("espsrc", &ivoid, &synthetic_image(16, 16, 2)).unwrap();

        for sigma in [1.0, 10.0] {
            let out = fed.invoke_via_datalink(&token, &ivoid, sigma).unwrap().unwrap();
            assert_eq!(out.status, 200, "sigma {sigma} should be accepted");
        }
        for sigma in [0.999, 10.001] {
            let out = fed.invoke_via_datalink(&token, &ivoid, sigma).unwrap().unwrap();
            assert_eq!(out.status, 422, "sigma {sigma} should be rejected");
            let body: serde_json::Value = serde_json::from_slice(&out.body).unwrap();
            assert_eq!(body["message"], SIGMA_MESSAGE);
        }

        // bare NaN token in the body, which strict JSON cannot encode
        let url = format!("{}/gaussconv/", fed.sites()[0].gatekeeper_url);
        let resp = reqwest::blocking::Client::new()
            .post(url)
            .bearer_auth(&token)
            .header("content-type", "application/json")
            .body(format!("{{\"ivo\": \"{PTF_IVO}\", \"sigma\": NaN}}"))
            .send()
            .unwrap();
        assert_eq!(resp.status().as_u16(), 422, "NaN sigma should fail validation, not parsing");
        let body: serde_json::Value = resp.json().unwrap();
        assert_eq!(body["message"], SIGMA_MESSAGE);
    });
}

#[test]
fn criterion_03_convolution_properties() {
    criterion(3, "kernel unit sum, fixed point, impulse response, oracle agreement", || {
        let started = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(3);

        for _ in 0..50 {
            let sigma = rng.gen_range(1.0..=10.0);
            let kernel = build_kernel(sigma).unwrap();
            let sum: f64 = kernel.weights.iter().sum();
            assert!((sum - 1.0).abs() <= 1e-12, "sigma {sigma}: kernel sum {sum}");
        }

        // constant image is a fixed point of a unit-sum kernel
        let constant = FitsImage::new(20, 20, vec![7.25; 400]).unwrap();
        let kernel = build_kernel(3.0).unwrap();
        let blurred = convolve2d(&constant, &kernel);
        for p in &blurred.pixels {
            assert!((p - 7.25).abs() <= 1e-12);
        }

        // centre impulse reproduces the kernel away from the borders
        let r = kernel.radius;
        let n = 4 * r + 1;
        let mut pixels = vec![0.0; n * n];
        pixels[(2 * r) * n + 2 * r] = 1.0;
        let impulse = FitsImage::new(n, n, pixels).unwrap();
        let response = convolve2d(&impulse, &kernel);
        let k = 2 * r + 1;
        for ky in 0..k {
            for kx in 0..k {
                let got = response.pixel(r + kx, r + ky);
                let want = kernel.weights[(k - 1 - ky) * k + (k - 1 - kx)];
                assert!((got - want).abs() <= 1e-12, "impulse mismatch at ({kx},{ky})");
            }
        }

        for case in 0..200 {
            let w = rng.gen_range(1..=64);
            let h = rng.gen_range(1..=64);
            let image = synthetic_image(w, h, rng.gen());
            let kernel = build_kernel(rng.gen_range(1.0..=10.0)).unwrap();
            let fast = convolve2d(&image, &kernel);
            let slow = direct_convolve(&image, &kernel);
            for (got, want) in fast.pixels.iter().zip(&slow) {
                assert!((got - want).abs() <= 1e-10, "case {case} ({w}x{h})");
            }
        }

        let elapsed = started.elapsed();
        assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget 60s");
    });
}

mod fake_upstream {
    use std::io::{Read, Write};
    use std::net::TcpListener;
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Arc;

    /// Minimal counting HTTP server: every request increments the counter
    /// and gets a 200 back.
    pub fn start() -> (u16, Arc<AtomicUsize>) {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind fake upstream");
        let port = listener.local_addr().unwrap().port();
        let hits = Arc::new(AtomicUsize::new(0));
        let counter = hits.clone();
        std::thread::spawn(move || {
            for stream in listener.incoming() {
                let Ok(mut stream) = stream else { continue };
                let mut buf = [0u8; 8192];
                let _ = stream.read(&mut buf);
                counter.fetch_add(1, Ordering::SeqCst);
                let _ = stream.write_all(
                    b"HTTP/1.1 200 OK\r\ncontent-length: 2\r\nconnection: close\r\n\r\nok",
                );
            }
        });
        (port, hits)
    }
}

#[test]
fn criterion_04_auth_pipeline_ordering() {
    criterion(4, "401/401/403/200 ordering with zero upstream contact on rejections", || {
        use fedfaas_harness::process::spawn_service;
        use std::sync::atomic::Ordering;

        let dir = tempfile::tempdir().unwrap();
        let key_file = dir.path().join("iam.key");
        std::fs::write(&key_file, format!("harness\t{}\n", hex::encode([7u8; 32]))).unwrap();

        let iam = spawn_service(
            "iam",
            &["iam".into(), "--port".into(), "0".into(), "--key-file".into(), key_file.display().to_string()],
        )
        .unwrap();
        let iam_url = format!("http://127.0.0.1:{}", iam.port);

        let rules = dir.path().join("rules.tsv");
        std::fs::write(&rules, "astronomers\ttesting\t*\tAllow\n").unwrap();
        let permissions = spawn_service(
            "permissions",
            &["permissions".into(), "--port".into(), "0".into(), "--rules".into(), rules.display().to_string()],
        )
        .unwrap();
        let permissions_url = format!("http://127.0.0.1:{}", permissions.port);

        let (upstream_port, hits) = fake_upstream::start();

        let config = dir.path().join("gatekeeper.yaml");
        std::fs::write(
            &config,
            "service:\n  - route: \"/gaussconv\"\n    namespace: \"gaussconv\"\n    service_name: \"gaussconv-srv\"\n    ingress_host: \"\"\n    port: 8000\n    uuid: \"u-1\"\n",
        )
        .unwrap();
        let gatekeeper = spawn_service(
            "gatekeeper",
            &[
                "gatekeeper".into(),
                "--port".into(),
                "0".into(),
                "--config".into(),
                config.display().to_string(),
                "--permissions-url".into(),
                permissions_url,
                "--key-file".into(),
                key_file.display().to_string(),
                "--rewrite".into(),
                "/gaussconv=/gaussconv_fitsimg/".into(),
                "--resolve".into(),
                format!("gaussconv/gaussconv-srv=127.0.0.1:{upstream_port}"),
            ],
        )
        .unwrap();
        let gk = format!("http://127.0.0.1:{}/gaussconv/", gatekeeper.port);

        let http = reqwest::blocking::Client::new();
        let body = serde_json::json!({"ivo": PTF_IVO, "sigma": 2.0});

        let resp = http.post(&gk).json(&body).send().unwrap();
        assert_eq!(resp.status().as_u16(), 401, "missing token");

        let token: serde_json::Value = http
            .post(format!("{iam_url}/token"))
            .json(&serde_json::json!({"subject": "alice", "groups": ["astronomers"], "ttl_seconds": 600}))
            .send()
            .unwrap()
            .json()
            .unwrap();
        let token = token["token"].as_str().unwrap().to_string();

        let mut tampered = token.clone();
        let last = tampered.pop().unwrap();
        tampered.push(if last == 'A' { 'B' } else { 'A' });
        let resp = http.post(&gk).bearer_auth(&tampered).json(&body).send().unwrap();
        assert_eq!(resp.status().as_u16(), 401, "tampered token");

        let stranger: serde_json::Value = http
            .post(format!("{iam_url}/token"))
            .json(&serde_json::json!({"subject": "mallory", "groups": ["strangers"], "ttl_seconds": 600}))
            .send()
            .unwrap()
            .json()
            .unwrap();
        let resp = http
            .post(&gk)
            .bearer_auth(stranger["token"].as_str().unwrap())
            .json(&body)
            .send()
            .unwrap();
        assert_eq!(resp.status().as_u16(), 403, "no matching rule");

        assert_eq!(hits.load(Ordering::SeqCst), 0, "rejections must not reach the upstream");

        let resp = http.post(&gk).bearer_auth(&token).json(&body).send().unwrap();
        assert_eq!(resp.status().as_u16(), 200, "authorised request");
        assert_eq!(hits.load(Ordering::SeqCst), 1, "exactly one forwarded request");
    });
}

#[test]
fn criterion_05_data_proximate_placement() {
    criterion(5, "50 random placements stay local; no co-located site means no link", || {
        let sites = vec![
            SiteSpec { site_id: "asite".into(), functions: vec!["gaussconv".into()] },
            SiteSpec { site_id: "bsite".into(), functions: vec!["gaussconv".into()] },
            SiteSpec { site_id: "csite".into(), functions: vec!["gaussconv-gpu".into()] },
        ];
        let mut fed = Federation::start(&sites, &allow_all_for("ds")).expect("federation starts");
        let token = fed.issue_token("alice", &["astronomers".into()]).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let site_ids = ["asite", "bsite", "csite"];
        let mut placements = Vec::new();
        for i in 0..50 {
            let ivo = format!("ivo://espsrc.iaa.csic.es/datasets/fits?ds/aa/f{i:02}.fits");
            let ivoid = parse_ivoid(&ivo).unwrap();
            let site = site_ids[rng.gen_range(0..3)];
            fed.seed_storage(site, &ivoid, &synthetic_image(16, 16, i)).unwrap();
            placements.push((ivoid, site));
        }

        let mut local = 0;
        let mut no_site = 0;
        for (ivoid, site) in &placements {
            match fed.invoke_via_datalink(&token, ivoid, 2.0).unwrap() {
                Some(out) => {
                    assert_eq!(out.status, 200);
                    assert_eq!(
                        out.target_site.as_deref(),
                        Some(*site),
                        "link must target the replica-holding site"
                    );
                    local += 1;
                }
                None => {
                    // the only site without the function is csite
                    assert_eq!(*site, "csite", "missing link despite co-located function");
                    no_site += 1;
                }
            }
        }
        assert!(local > 0 && no_site > 0, "both branches must be exercised");
        assert_eq!(fed.total_cross_site_forwards(), 0, "no request may cross sites");

        // the CLI reports the no-link case as "no eligible site"
        let orphan = placements.iter().find(|(_, s)| *s == "csite").unwrap();
        let session = fed.root_path().join("cli-session.json");
        let client = locate_binary("fedfaas");
        let status = std::process::Command::new(&client)
            .env("FEDFAAS_SESSION_FILE", &session)
            .args([
                "login",
                "--iam-url", &fed.iam_url,
                "--datalink-url", &fed.datalink_url,
                "--catalogue-url", &fed.catalogue_url,
                "--subject", "alice",
                "--group", "astronomers",
            ])
            .output()
            .expect("client binary runs");
        assert!(status.status.success(), "login: {}", String::from_utf8_lossy(&status.stderr));

        let name = orphan.0.storage_path.rsplit('/').next().unwrap();
        let out = std::process::Command::new(&client)
            .env("FEDFAAS_SESSION_FILE", &session)
            .args([
                "gaussconv",
                "--namespace", "ds",
                "--name", name,
                "--sigma", "2.0",
                "--output", &fed.root_path().join("out.fits").display().to_string(),
            ])
            .output()
            .expect("client binary runs");
        assert_eq!(out.status.code(), Some(4), "expected the no-eligible-site exit code");
        assert!(
            String::from_utf8_lossy(&out.stderr).contains("no eligible site"),
            "stderr: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    });
}

#[test]
fn criterion_06_votable_golden() {
    criterion(6, "service VOTable is byte-identical to the stored golden file", || {
        use fedfaas_core::catalogue::{ReplicaCatalogue, ReplicaRecord};
        use fedfaas_core::datalink::{links_for, render_votable};
        use fedfaas_core::sitecaps::{gaussconv_descriptor, SiteRegistry};

        let ivoid = parse_ivoid(PTF_IVO).unwrap();
        let mut registry = SiteRegistry::new();
        registry.register_site("espsrc", "https://gateway.espsrc.example").unwrap();
        registry
            .register_service("espsrc", gaussconv_descriptor("2f6e3e2a-5b70-4e6e-9dbb-0c1b1df3a001"))
            .unwrap();
        let mut catalogue = ReplicaCatalogue::new();
        catalogue.register_replica(ReplicaRecord::new(ivoid.clone(), "espsrc")).unwrap();

        let links = links_for(&registry, &catalogue, &ivoid);
        assert_eq!(links.len(), 1);
        let rendered = render_votable(&ivoid, &links);
        let text = std::str::from_utf8(&rendered).unwrap();

        assert!(text.contains("<RESOURCE type=\"meta\" ID=\"gaussconv\" utype=\"adhoc:service\">"));
        assert!(text.contains("name=\"SIGMA\" datatype=\"double\" value=\"1.0\""));
        let link = &links[0];
        assert!(text.contains(&format!(
            "name=\"resourceIdentifier\" datatype=\"char\" arraysize=\"{}\" value=\"{}\"",
            link.resource_identifier.chars().count(),
            link.resource_identifier
        )));
        assert!(text.contains(&format!(
            "name=\"accessURL\" datatype=\"char\" arraysize=\"{}\" value=\"{}\"",
            link.access_url.chars().count(),
            link.access_url
        )));

        let golden = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden/datalink_votable.xml");
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::create_dir_all(golden.parent().unwrap()).unwrap();
            std::fs::write(&golden, &rendered).unwrap();
        }
        let stored = std::fs::read(&golden).expect("golden file present");
        assert_eq!(rendered, stored, "rendered VOTable differs from the golden file");
    });
}

#[test]
fn criterion_07_fits_round_trip() {
    criterion(7, "FITS write/read identity on 200 images, block-aligned, cards kept", || {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for case in 0..200 {
            let w = rng.gen_range(1..=48);
            let h = rng.gen_range(1..=48);
            let mut image = synthetic_image(w, h, rng.gen());
            image.push_card(HeaderCard::with_comment(
                "OBSERVER",
                CardValue::Str(format!("survey-{case}")),
                "synthetic",
            ));

            let bytes = write_fits(&image).unwrap();
            assert_eq!(bytes.len() % 2880, 0, "output must be block-aligned");
            let back = read_fits(&bytes).unwrap();
            assert_eq!(back.width, image.width);
            assert_eq!(back.height, image.height);
            assert_eq!(back.pixels, image.pixels, "case {case}: pixel bits must survive");
            assert!(
                back.cards.iter().any(|c| c.keyword == "OBSERVER"),
                "case {case}: unknown card dropped"
            );

            // write∘read is also the identity on its own output
            let again = write_fits(&back).unwrap();
            assert_eq!(bytes, again, "case {case}: serialization must be stable");
        }
    });
}

#[test]
fn criterion_08_permissions_algebra() {
    criterion(8, "default deny, rule-order independence, deny dominance", || {
        let empty = PolicyStore::new()
            .check_authorization(&["astronomers".to_string()], "testing", "u-1");
        assert_eq!(empty.effect, Effect::Deny, "empty store must deny");

        fn permutations(rules: &[PolicyRule]) -> Vec<Vec<PolicyRule>> {
            if rules.len() <= 1 {
                return vec![rules.to_vec()];
            }
            let mut out = Vec::new();
            for i in 0..rules.len() {
                let mut rest = rules.to_vec();
                let head = rest.remove(i);
                for mut tail in permutations(&rest) {
                    tail.insert(0, head.clone());
                    out.push(tail);
                }
            }
            out
        }

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let groups = ["astronomers", "operators", "*"];
        let namespaces = ["testing", "survey", "*"];
        let uuids = ["u-1", "u-2", "*"];
        for _ in 0..40 {
            let n = rng.gen_range(0..=5);
            let rules: Vec<PolicyRule> = (0..n)
                .map(|_| PolicyRule {
                    group: groups[rng.gen_range(0..3)].into(),
                    namespace: namespaces[rng.gen_range(0..3)].into(),
                    function_uuid: uuids[rng.gen_range(0..3)].into(),
                    effect: if rng.gen_bool(0.5) { Effect::Allow } else { Effect::Deny },
                })
                .collect();

            let queries = [
                (vec!["astronomers".to_string()], "testing", "u-1"),
                (vec!["operators".to_string()], "survey", "u-2"),
                (vec!["astronomers".to_string(), "operators".to_string()], "testing", "u-2"),
            ];
            for (qg, qn, qu) in &queries {
                let baseline = {
                    let mut store = PolicyStore::new();
                    for r in &rules {
                        store.add_rule(r.clone());
                    }
                    store.check_authorization(qg, qn, qu).effect
                };
                for perm in permutations(&rules) {
                    let mut store = PolicyStore::new();
                    let matching_deny = perm.iter().any(|r| {
                        r.effect == Effect::Deny
                            && (r.group == "*" || qg.contains(&r.group))
                            && (r.namespace == "*" || r.namespace == *qn)
                            && (r.function_uuid == "*" || r.function_uuid == *qu)
                    });
                    for r in perm {
                        store.add_rule(r);
                    }
                    let decision = store.check_authorization(qg, qn, qu).effect;
                    assert_eq!(decision, baseline, "decision must not depend on rule order");
                    if matching_deny {
                        assert_eq!(decision, Effect::Deny, "a matching Deny must dominate");
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_09_gatekeeper_config() {
    criterion(9, "reference config parses; duplicates and bad ports are rejected precisely", || {
        let document = b"service:\n  - route: \"/gaussconv\"\n    namespace: \"gaussconv\"\n    service_name: \"gaussconv-srv\"\n    ingress_host: \"gateway.local\"\n    port: 8000\n    uuid: \"2f6e3e2a-5b70-4e6e-9dbb-0c1b1df3a001\"\n";
        let config = load_config(document).unwrap();
        assert_eq!(config.services.len(), 1);
        let entry = &config.services[0];
        assert_eq!(entry.route, "/gaussconv");
        assert_eq!(entry.namespace, "gaussconv");
        assert_eq!(entry.service_name, "gaussconv-srv");
        assert_eq!(entry.port, 8000);

        let dup = b"service:\n  - {route: \"/gaussconv\", namespace: a, service_name: s, port: 8000, uuid: u1}\n  - {route: \"/gaussconv\", namespace: b, service_name: t, port: 8001, uuid: u2}\n";
        assert_eq!(
            load_config(dup).unwrap_err(),
            ConfigError::DuplicateRoute { index: 1, route: "/gaussconv".into() }
        );

        let bad_port = b"service:\n  - {route: \"/f\", namespace: a, service_name: s, port: 0, uuid: u}\n";
        assert_eq!(
            load_config(bad_port).unwrap_err(),
            ConfigError::BadPort { index: 0, port: 0 }
        );

        let missing = b"service:\n  - {route: \"/f\", namespace: a, service_name: s, port: 80}\n";
        assert_eq!(
            load_config(missing).unwrap_err(),
            ConfigError::MissingField { index: 0, field: "uuid" }
        );
    });
}

#[test]
fn criterion_10_registry_variants() {
    criterion(10, "gaussconv and gaussconv-gpu coexist; tag filter isolates the gpu variant", || {
        let sites =
            vec![SiteSpec { site_id: "espsrc".into(), functions: vec!["gaussconv".into(), "gaussconv-gpu".into()] }];
        let fed = Federation::start(&sites, &[]).expect("federation starts");
        let http = reqwest::blocking::Client::new();

        let plain: Vec<serde_json::Value> = http
            .get(format!("{}/services", fed.sitecaps_url))
            .query(&[("name", "gaussconv")])
            .send()
            .unwrap()
            .json()
            .unwrap();
        assert_eq!(plain.len(), 1);
        assert_eq!(plain[0]["descriptor"]["name"], "gaussconv");
        assert!(plain[0]["descriptor"]["hardware_tags"].as_array().unwrap().is_empty());

        let gpu: Vec<serde_json::Value> = http
            .get(format!("{}/services", fed.sitecaps_url))
            .query(&[("name", "gaussconv-gpu"), ("tag", "gpu")])
            .send()
            .unwrap()
            .json()
            .unwrap();
        assert_eq!(gpu.len(), 1);
        assert_eq!(gpu[0]["descriptor"]["name"], "gaussconv-gpu");
        assert_eq!(gpu[0]["descriptor"]["hardware_tags"][0], "gpu");
        assert_ne!(plain[0]["descriptor"]["uuid"], gpu[0]["descriptor"]["uuid"]);

        // a tag the plain descriptor lacks must exclude it
        let none: Vec<serde_json::Value> = http
            .get(format!("{}/services", fed.sitecaps_url))
            .query(&[("name", "gaussconv"), ("tag", "gpu")])
            .send()
            .unwrap()
            .json()
            .unwrap();
        assert!(none.is_empty());
    });
}
