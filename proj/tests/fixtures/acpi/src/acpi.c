/* ACPI driver stub */
#include <stddef.h>

int acpi_register(void);

#ifdef CONFIG_ACPI
int acpi_init(void)
{
	return acpi_register();
}

#ifdef CONFIG_ACPI_DEBUG
int acpi_debug_level = 1;

int acpi_debug(void)
{
	return acpi_debug_level;
}
#endif
#endif
