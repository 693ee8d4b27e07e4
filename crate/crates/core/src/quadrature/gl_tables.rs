//! Gauss–Legendre nodes and weights on [-1, 1] to 30 significant digits.
//! Only the positive half is stored (all orders are even), ascending.
#![allow(clippy::excessive_precision)]

pub(crate) const NODES_8: [f64; 4] = [
    0.18343464249564980493947614236,
    0.525532409916328985817739049189,
    0.796666477413626739591553936476,
    0.960289856497536231683560868569,
];
pub(crate) const WEIGHTS_8: [f64; 4] = [
    0.362683783378361982965150449277,
    0.313706645877887287337962201987,
    0.222381034453374470544355994426,
    0.10122853629037625915253135431,
];

pub(crate) const NODES_16: [f64; 8] = [
    0.095012509837637440185319335425,
    0.28160355077925891323046050146,
    0.458016777657227386342419442984,
    0.617876244402643748446671764049,
    0.755404408355003033895101194847,
    0.865631202387831743880467897712,
    0.944575023073232576077988415535,
    0.98940093499164993259615417345,
];
pub(crate) const WEIGHTS_16: [f64; 8] = [
    0.189450610455068496285396723208,
    0.182603415044923588866763667969,
    0.16915651939500253818931207903,
    0.149595988816576732081501730547,
    0.124628971255533872052476282192,
    0.0951585116824927848099251076022,
    0.0622535239386478928628438369944,
    0.027152459411754094851780572456,
];

pub(crate) const NODES_20: [f64; 10] = [
    0.0765265211334973337546404093988,
    0.227785851141645078080496195369,
    0.373706088715419560672548177025,
    0.510867001950827098004364050955,
    0.636053680726515025452836696226,
    0.746331906460150792614305070356,
    0.839116971822218823394529061702,
    0.912234428251325905867752441203,
    0.963971927277913791267666131197,
    0.993128599185094924786122388471,
];
pub(crate) const WEIGHTS_20: [f64; 10] = [
    0.152753387130725850698084331955,
    0.149172986472603746787828737002,
    0.142096109318382051329298325067,
    0.131688638449176626898494499748,
    0.118194531961518417312377377711,
    0.10193011981724043503675013548,
    0.083276741576704748724758143222,
    0.062672048334109063569506535187,
    0.0406014298003869413310399522749,
    0.0176140071391521183118619623519,
];

pub(crate) const NODES_24: [f64; 12] = [
    0.0640568928626056260850430826247,
    0.191118867473616309158639820757,
    0.31504267969616337438679329132,
    0.433793507626045138487084231913,
    0.545421471388839535658375617218,
    0.648093651936975569252495786911,
    0.7401241915785543642438281031,
    0.82000198597390292195394987267,
    0.886415527004401034213154341982,
    0.938274552002732758523649001709,
    0.974728555971309498198391993008,
    0.995187219997021360179997409701,
];
pub(crate) const WEIGHTS_24: [f64; 12] = [
    0.127938195346752156974056165225,
    0.125837456346828296121375382511,
    0.121670472927803391204463153476,
    0.115505668053725601353344483907,
    0.107444270115965634782577342447,
    0.0976186521041138882698806644642,
    0.0861901615319532759171852029837,
    0.0733464814110803057340336152531,
    0.0592985849154367807463677585001,
    0.0442774388174198061686027482113,
    0.0285313886289336631813078159519,
    0.01234122979998719954680566707,
];

pub(crate) const NODES_32: [f64; 16] = [
    0.0483076656877383162348125704405,
    0.144471961582796493485186373599,
    0.239287362252137074544603209166,
    0.33186860228212764977991680573,
    0.421351276130635345364119436172,
    0.506899908932229390023747474378,
    0.587715757240762329040745476402,
    0.663044266930215200975115168663,
    0.732182118740289680387426665091,
    0.79448379596794240696309729897,
    0.849367613732569970133693004968,
    0.896321155766052123965307243719,
    0.934906075937739689170919134835,
    0.964762255587506430773811928118,
    0.985611511545268335400175044631,
    0.997263861849481563544981128665,
];
pub(crate) const WEIGHTS_32: [f64; 16] = [
    0.0965400885147278005667648300636,
    0.0956387200792748594190820022041,
    0.0938443990808045656391802376681,
    0.0911738786957638847128685771116,
    0.0876520930044038111427714627518,
    0.0833119242269467552221990746043,
    0.0781938957870703064717409188283,
    0.0723457941088485062253993564785,
    0.0658222227763618468376500637069,
    0.0586840934785355471452836373002,
    0.0509980592623761761961632446895,
    0.0428358980222266806568786466061,
    0.0342738629130214331026877322524,
    0.0253920653092620594557525897892,
    0.0162743947309056706051705622064,
    0.00701861000947009660040706373885,
];

pub(crate) const NODES_48: [f64; 24] = [
    0.0323801709628693620333222431521,
    0.0970046992094626989300539558536,
    0.161222356068891718056437390783,
    0.224763790394689061224865440175,
    0.287362487355455576735886461317,
    0.34875588629216073815981793727,
    0.408686481990716729916225495815,
    0.466902904750958404544928861651,
    0.523160974722233033678225869138,
    0.57722472608397270381780923854,
    0.62886739677651362399516493307,
    0.677872379632663905211851280676,
    0.724034130923814654674482233494,
    0.767159032515740339253855437523,
    0.807066204029442627082553043025,
    0.84358826162439353071108984452,
    0.876572020274247885905693554805,
    0.905879136715569672822074835671,
    0.931386690706554333114174380102,
    0.952987703160430860722960666026,
    0.970591592546247250461411983801,
    0.984124583722826857744583600027,
    0.993530172266350757547928750849,
    0.998771007252426118600541491563,
];
pub(crate) const WEIGHTS_48: [f64; 24] = [
    0.0647376968126839225030249387366,
    0.0644661644359500822065041936577,
    0.0639242385846481866239062018255,
    0.0631141922862540256571260227502,
    0.0620394231598926639041977841376,
    0.0607044391658938800529692320278,
    0.0591148396983956357464748174335,
    0.0572772921004032157051502346847,
    0.0551995036999841628682034951916,
    0.0528901894851936670955050562647,
    0.0503590355538544749578076190879,
    0.0476166584924904748259066234789,
    0.0446745608566942804194485871259,
    0.0415450829434647492140588223611,
    0.0382413510658307063172172565237,
    0.0347772225647704388925485859638,
    0.0311672278327980889020657568464,
    0.0274265097083569482000738362625,
    0.0235707608393243791405193013784,
    0.0196161604573555278144607196522,
    0.0155793157229438487281769558345,
    0.0114772345792345394895926676091,
    0.00732755390127626210238397962179,
    0.00315334605230583863267731154389,
];

pub(crate) const NODES_64: [f64; 32] = [
    0.0243502926634244325089558428537,
    0.0729931217877990394495429419403,
    0.121462819296120554470376463492,
    0.169644420423992818037313629748,
    0.217423643740007084149648748989,
    0.26468716220876741637396417251,
    0.31132287199021095615751269856,
    0.357220158337668115950442615046,
    0.40227015796399160369576677126,
    0.446366017253464087984947714759,
    0.489403145707052957478526307022,
    0.531279464019894545658013903544,
    0.571895646202634034283878116659,
    0.611155355172393250248852971019,
    0.648965471254657339857761231993,
    0.685236313054233242563558371031,
    0.719881850171610826848940217832,
    0.752819907260531896611863774886,
    0.783972358943341407610220525214,
    0.813265315122797559741923338086,
    0.840629296252580362751691544696,
    0.86599939815409281976078338507,
    0.889315445995114105853404038273,
    0.910522137078502805756380668008,
    0.929569172131939575821490154559,
    0.946411374858402816062481491347,
    0.961008799652053718918614121897,
    0.973326827789910963741853507352,
    0.983336253884625956931299302157,
    0.991013371476744320739382383443,
    0.996340116771955279346924500676,
    0.999305041735772139456905624346,
];
pub(crate) const WEIGHTS_64: [f64; 32] = [
    0.0486909570091397203833653907347,
    0.048575467441503426934799066784,
    0.048344762234802957169769527158,
    0.0479993885964583077281261798713,
    0.0475401657148303086622822069442,
    0.0469681828162100173253262857546,
    0.0462847965813144172959532492323,
    0.0454916279274181444797709969713,
    0.0445905581637565630601347100309,
    0.0435837245293234533768278609737,
    0.0424735151236535890073397679088,
    0.0412625632426235286101562974736,
    0.0399537411327203413866569261283,
    0.0385501531786156291289624969468,
    0.0370551285402400460404151018096,
    0.0354722132568823838106931467152,
    0.0338051618371416093915654821107,
    0.0320579283548515535854675043479,
    0.0302346570724024788679740598195,
    0.0283396726142594832275113052002,
    0.0263774697150546586716917926252,
    0.0243527025687108733381775504091,
    0.0222701738083832541592983303842,
    0.0201348231535302093723403167285,
    0.0179517157756973430850453020011,
    0.0157260304760247193219659952975,
    0.013463047896718642598060766686,
    0.0111681394601311288185904930192,
    0.00884675982636394772303091465973,
    0.00650445796897836285611736039998,
    0.00414703326056246763528753572855,
    0.00178328072169643294729607914497,
];
